//! Shared fixtures for the kernel benchmarks.

use fracqueue::{QuadratureControl, QueueParams, SeriesControl};

/// Rates of the reference probability curves: `λ = 5, μ = 3, ξ = 1`.
pub fn curve_params(alpha: f64) -> QueueParams {
    QueueParams::new(5.0, 3.0, 1.0, alpha).expect("valid fixture")
}

/// First reference study configuration: `α = 0.9, λ = 4, μ = 2, ξ = 1`.
pub fn table_params() -> QueueParams {
    QueueParams::new(4.0, 2.0, 1.0, 0.9).expect("valid fixture")
}

pub fn controls() -> (QuadratureControl, SeriesControl) {
    (QuadratureControl::default(), SeriesControl::default())
}

#[cfg(test)]
mod tests {
    #[test]
    fn fixtures_are_valid() {
        assert_eq!(super::curve_params(0.7).theta(), 9.0);
        assert_eq!(super::table_params().theta(), 7.0);
    }
}
