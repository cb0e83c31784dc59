use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform one-dimensional grid of `n` nodes spanning `[min, max]` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    min: f64,
    max: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 nodes, got {n}"
            )));
        }
        if !(min.is_finite() && max.is_finite()) || max <= min {
            return Err(Error::InvalidGrid(format!(
                "bounds [{min}, {max}] are not ascending"
            )));
        }
        Ok(Self { min, max, n })
    }

    /// Grid spanning `center ± half_width`.
    pub fn centered(center: f64, half_width: f64, n: usize) -> Result<Self> {
        Self::new(center - half_width, center + half_width, n)
    }

    /// Grid starting at `min` with the given spacing.
    pub fn from_spacing(min: f64, spacing: f64, n: usize) -> Result<Self> {
        Self::new(min, min + spacing * (n as f64 - 1.0), n)
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.n as f64 - 1.0)
    }

    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        self.min + self.spacing() * i as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.n).map(|i| self.min + h * i as f64).collect()
    }

    /// Composite trapezoid weights.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let h = self.spacing();
        let mut w = vec![h; self.n];
        w[0] = 0.5 * h;
        w[self.n - 1] = 0.5 * h;
        w
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.min && x <= self.max
    }

    pub fn shifted(&self, offset: f64) -> Self {
        Self {
            min: self.min + offset,
            max: self.max + offset,
            n: self.n,
        }
    }

    /// Spacing-preserving equality test used when combining sampled states.
    pub(crate) fn same_as(&self, other: &Self) -> bool {
        let scale = self.max.abs().max(self.min.abs()).max(1.0);
        self.n == other.n
            && (self.min - other.min).abs() <= 1e-12 * scale
            && (self.max - other.max).abs() <= 1e-12 * scale
    }
}
