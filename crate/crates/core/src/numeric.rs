//! Small numerical helpers shared by the quadrature routines.

/// Neumaier-compensated accumulator. Summation order is whatever order values
/// are pushed in, so callers control determinism.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Sum with compensation, in iteration order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().collect::<CompensatedSum>().total()
}

/// Standard normal upper tail mass outside `[lo, hi]` for a normal with the
/// given mean and standard deviation.
pub(crate) fn normal_mass_outside(mean: f64, std: f64, lo: f64, hi: f64) -> f64 {
    let below = 0.5 * libm::erfc((mean - lo) / (std * std::f64::consts::SQRT_2));
    let above = 0.5 * libm::erfc((hi - mean) / (std * std::f64::consts::SQRT_2));
    below + above
}
