/// Neumaier's variant of Kahan summation.
///
/// Also tracks the sum of magnitudes, which bounds the rounding error of an
/// alternating series: a result much smaller than `abs_sum * EPSILON` has no
/// significant digits left.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
    abs_sum: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs_sum += x.abs();
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn abs_sum(&self) -> f64 {
        self.abs_sum
    }

    /// Rounding-error estimate for a sum whose terms each carry a few ulps of error.
    pub fn error_bound(&self) -> f64 {
        8.0 * f64::EPSILON * self.abs_sum
    }
}
