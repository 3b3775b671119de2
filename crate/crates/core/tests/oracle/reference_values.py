"""High-precision reference values for the fracqueue test suite.

Every number frozen into a Rust test as a reference is printed by this
script. It uses mpmath at 50 significant digits and evaluates each quantity
from its defining series or integral, independently of the Rust code.

    python3 crates/core/tests/oracle/reference_values.py
"""

import mpmath as mp

mp.mp.dps = 50


def show(label, value):
    print(f"{label:45s} {mp.nstr(value, 20)}")


def bessel_scaled(k, x):
    return mp.besseli(k, x) * mp.exp(-x)


def wright_m(alpha, x, terms=600):
    # defining series at 120 digits, so the alternating cancellation is harmless
    with mp.workdps(120):
        alpha, x = mp.mpf(alpha), mp.mpf(x)
        s = mp.mpf(0)
        for r in range(terms):
            s += (-x) ** r * mp.rgamma(1 - alpha * (1 + r)) / mp.factorial(r)
        return +s


def ml3(delta, beta, gamma, w, terms=400):
    # exact rational coefficients, summed at working precision
    # the alternating series cancels about |w|^{1/beta} / ln 10 digits
    digits = 60 + int(abs(w) ** (1.0 / beta) / 2.3 * delta)
    with mp.workdps(digits):
        beta, gamma, w = mp.mpf(beta), mp.mpf(gamma), mp.mpf(w)
        s = mp.mpf(0)
        for r in range(terms):
            s += w**r * mp.rf(delta, r) / (mp.factorial(r) * mp.gamma(beta * r + gamma))
        return +s


if __name__ == "__main__":
    print("# Bessel, scaled e^{-x} I_k(x)")
    for k in (0, 1, 5, 20):
        show(f"exp(-10) I_{k}(10)", bessel_scaled(k, 10))
    show("I_0(1)", mp.besseli(0, 1))

    print("# Wright M_alpha")
    show("M_0.5(1)", wright_m(0.5, 1))
    show("M_0.7(2/3^0.7) / 3^0.7", wright_m(0.7, 2 / mp.mpf(3) ** 0.7) / mp.mpf(3) ** 0.7)
    show("M_0.3(1.7)", wright_m(0.3, 1.7))
    show("M_0.9(1.2)", wright_m(0.9, 1.2))
    show("M_0.6(4)", wright_m(0.6, 4))

    print("# Mittag-Leffler E^delta_{beta,gamma}")
    show("E^2_{0.5,1.5}(-2)", ml3(2, 0.5, 1.5, -2, 200))
    show("E^1_{0.3,1}(-5)", ml3(1, 0.3, 1, -5, 4000))
    show("E^1_{0.9,1}(-20)", ml3(1, 0.9, 1, -20, 600))
    show("E^2_{0.3,0.6}(-4)", ml3(2, 0.3, 0.6, -4, 4000))
    show("E^3_{0.9,2.8}(-15)", ml3(3, 0.9, 2.8, -15, 600))
    show("E^1_{0.7,0.7}(-9)", ml3(1, 0.7, 0.7, -9, 600))

    print("# asymptotic variance of theta-hat")
    a, t = mp.mpf("0.9"), mp.mpf(7)
    lt = mp.log(t)
    bracket = 20 * mp.pi**4 * (2 - a**2) - 3 * mp.pi**2 * (a**4 + 20 * a**2 - 32) * lt**2 - 720 * a**3 * lt * mp.zeta(3)
    show("sigma2_theta(0.9, 7)", t**2 * bracket / (120 * mp.pi**2))
