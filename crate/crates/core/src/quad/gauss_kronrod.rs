//! Globally adaptive 21-point Gauss-Kronrod integration.
//!
//! The vector form integrates several components that share one integrand
//! evaluation; the error used for subdivision is the largest component
//! error, so all components are resolved to the same absolute accuracy.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_478_260,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Tolerances and budget for [`integrate`] / [`integrate_vec`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_intervals: 2000,
        }
    }
}

impl QuadOptions {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct QuadResult {
    pub value: Vec<f64>,
    pub abs_err: f64,
    pub evaluations: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: Vec<f64>,
    err: f64,
    // rounding floor of `err`; no amount of bisection goes below it
    floor: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One 21-point Kronrod panel for a `dim`-component integrand.
fn kronrod_panel<F>(f: &mut F, a: f64, b: f64, dim: usize, buf: &mut [Vec<f64>]) -> (Vec<f64>, f64, f64)
where
    F: FnMut(f64, &mut [f64]),
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    // buf[0] = centre, buf[2j+1] = left node j, buf[2j+2] = right node j
    f(center, &mut buf[0]);
    for j in 0..10 {
        let dx = half * XGK[j];
        let (left, right) = buf[1 + 2 * j..].split_at_mut(1);
        f(center - dx, &mut left[0]);
        f(center + dx, &mut right[0]);
    }

    let mut value = vec![0.0; dim];
    let mut worst = 0.0_f64;
    let mut floor = 0.0_f64;
    for c in 0..dim {
        let fc = buf[0][c];
        let mut kron = WGK[10] * fc;
        let mut gauss = 0.0;
        let mut res_abs = WGK[10] * fc.abs();
        for j in 0..10 {
            let s = buf[1 + 2 * j][c] + buf[2 + 2 * j][c];
            kron += WGK[j] * s;
            res_abs += WGK[j] * (buf[1 + 2 * j][c].abs() + buf[2 + 2 * j][c].abs());
            if j % 2 == 1 {
                gauss += WG[j / 2] * s;
            }
        }
        let mean = 0.5 * kron;
        let mut res_asc = WGK[10] * (fc - mean).abs();
        for j in 0..10 {
            res_asc += WGK[j] * ((buf[1 + 2 * j][c] - mean).abs() + (buf[2 + 2 * j][c] - mean).abs());
        }
        let err = rescale_error(
            (kron - gauss) * half,
            res_abs * half.abs(),
            res_asc * half.abs(),
        );
        value[c] = kron * half;
        floor = floor.max(50.0 * f64::EPSILON * res_abs * half.abs());
        if !err.is_finite() || !value[c].is_finite() {
            worst = f64::INFINITY;
        } else {
            worst = worst.max(err);
        }
    }
    (value, worst, floor)
}

/// Adaptive integration of a vector-valued integrand over `breaks[0]..breaks[last]`.
///
/// `breaks` must be increasing and contain at least two points; the initial
/// partition uses every break so known features of the integrand (kinks, peaks)
/// start on panel boundaries.
pub fn integrate_vec<F>(mut f: F, breaks: &[f64], dim: usize, opts: QuadOptions) -> Result<QuadResult>
where
    F: FnMut(f64, &mut [f64]),
{
    assert!(breaks.len() >= 2, "need at least one interval");
    let mut buf = vec![vec![0.0; dim]; 21];
    let mut heap = BinaryHeap::new();
    let mut total = vec![0.0; dim];
    let mut total_err = 0.0;
    let mut total_floor = 0.0;
    let mut evaluations = 0;

    for w in breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (value, err, floor) = kronrod_panel(&mut f, w[0], w[1], dim, &mut buf);
        evaluations += 21;
        for c in 0..dim {
            total[c] += value[c];
        }
        total_err += err;
        total_floor += floor;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            err,
            floor,
        });
    }

    let target = |total: &[f64]| {
        let norm = total.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        opts.abs_tol.max(opts.rel_tol * norm)
    };

    // Stop on the tolerance, or once the estimate is dominated by rounding
    // in the panel sums (heavy cancellation between positive and negative parts).
    while total_err > target(&total) && total_err > 2.0 * total_floor {
        if heap.len() >= opts.max_intervals {
            return Err(Error::non_convergence(
                "adaptive quadrature",
                format!(
                    "error estimate {total_err:e} after {} intervals (target {:e})",
                    heap.len(),
                    target(&total)
                ),
            ));
        }
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval at floating-point resolution; accept what it has
            heap.push(Segment {
                err: 0.0,
                floor: 0.0,
                ..worst
            });
            total_err = heap.iter().map(|s| s.err).sum();
            total_floor = heap.iter().map(|s| s.floor).sum();
            continue;
        }
        let (lv, le, lf) = kronrod_panel(&mut f, worst.a, mid, dim, &mut buf);
        let (rv, re, rf) = kronrod_panel(&mut f, mid, worst.b, dim, &mut buf);
        evaluations += 42;
        for c in 0..dim {
            total[c] += lv[c] + rv[c] - worst.value[c];
        }
        total_err += le + re - worst.err;
        total_floor += lf + rf - worst.floor;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: lv,
            err: le,
            floor: lf,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: rv,
            err: re,
            floor: rf,
        });
        if !total_err.is_finite() {
            return Err(Error::non_convergence(
                "adaptive quadrature",
                "integrand produced a non-finite value",
            ));
        }
        // running sums drift; recompute occasionally
        if heap.len() % 64 == 0 {
            total = vec![0.0; dim];
            total_err = 0.0;
            total_floor = 0.0;
            for s in heap.iter() {
                for (t, v) in total.iter_mut().zip(&s.value) {
                    *t += v;
                }
                total_err += s.err;
                total_floor += s.floor;
            }
        }
    }

    // final pass in interval order so the result does not depend on heap layout
    let mut segs: Vec<Segment> = heap.into_vec();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = vec![0.0; dim];
    let mut abs_err = 0.0;
    for s in &segs {
        for (t, v) in value.iter_mut().zip(&s.value) {
            *t += v;
        }
        abs_err += s.err;
    }
    Ok(QuadResult {
        value,
        abs_err,
        evaluations,
    })
}

/// Scalar convenience wrapper around [`integrate_vec`]. Returns `(value, error estimate)`.
pub fn integrate<F>(mut f: F, breaks: &[f64], opts: QuadOptions) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let r = integrate_vec(|x, out: &mut [f64]| out[0] = f(x), breaks, 1, opts)?;
    Ok((r.value[0], r.abs_err))
}
