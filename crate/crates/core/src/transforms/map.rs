use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `| |det| - 1 |` for maps built from explicit entries.
pub const DET_TOLERANCE: f64 = 1e-12;
/// Looser tolerance applied to products and inverses of valid maps.
pub const NUMERIC_DET_TOLERANCE: f64 = 1e-9;

/// Real 2×2 matrix `[[r, s], [t, u]]` with `|ru - st| = 1`, acting on
/// momentum pairs as `z = T p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearMap2 {
    r: f64,
    s: f64,
    t: f64,
    u: f64,
}

impl LinearMap2 {
    pub fn new(r: f64, s: f64, t: f64, u: f64) -> Result<Self> {
        Self::checked(r, s, t, u, DET_TOLERANCE)
    }

    fn checked(r: f64, s: f64, t: f64, u: f64, tol: f64) -> Result<Self> {
        let det = r * u - s * t;
        if !det.is_finite() || (det.abs() - 1.0).abs() > tol {
            return Err(if tol == DET_TOLERANCE {
                Error::NotUnimodular(det.abs())
            } else {
                Error::Numeric(format!("|det| drifted to {:.15}", det.abs()))
            });
        }
        Ok(Self { r, s, t, u })
    }

    pub fn identity() -> Self {
        Self {
            r: 1.0,
            s: 0.0,
            t: 0.0,
            u: 1.0,
        }
    }

    /// `F = diag(1, -1)`: flips the second coordinate.
    pub fn flip() -> Self {
        Self {
            r: 1.0,
            s: 0.0,
            t: 0.0,
            u: -1.0,
        }
    }

    /// `T_cm = [[1, 1], [μ2, -μ1]]`, mapping `(p1, p2)` to total and relative
    /// momentum `(p, q)`.
    pub fn center_of_mass(m1: f64, m2: f64) -> Result<Self> {
        let (mu1, mu2) = fractions(m1, m2)?;
        Self::checked(1.0, 1.0, mu2, -mu1, NUMERIC_DET_TOLERANCE)
    }

    /// `M = T_cm⁻¹ F T_cm = [[μ1 - μ2, 2μ1], [2μ2, μ2 - μ1]]`: reverses the
    /// relative momentum at fixed total momentum.
    pub fn reflection(m1: f64, m2: f64) -> Result<Self> {
        let (mu1, mu2) = fractions(m1, m2)?;
        Self::checked(
            mu1 - mu2,
            2.0 * mu1,
            2.0 * mu2,
            mu2 - mu1,
            NUMERIC_DET_TOLERANCE,
        )
    }

    pub fn entries(&self) -> [[f64; 2]; 2] {
        [[self.r, self.s], [self.t, self.u]]
    }

    pub fn det(&self) -> f64 {
        self.r * self.u - self.s * self.t
    }

    #[inline]
    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        [self.r * p[0] + self.s * p[1], self.t * p[0] + self.u * p[1]]
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        Self::checked(
            self.u / det,
            -self.s / det,
            -self.t / det,
            self.r / det,
            NUMERIC_DET_TOLERANCE,
        )
    }

    /// Matrix product `self · other` (apply `other` first).
    pub fn then_after(&self, other: &Self) -> Result<Self> {
        Self::checked(
            self.r * other.r + self.s * other.t,
            self.r * other.s + self.s * other.u,
            self.t * other.r + self.u * other.t,
            self.t * other.s + self.u * other.u,
            NUMERIC_DET_TOLERANCE,
        )
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.entries()
            .iter()
            .flatten()
            .zip(other.entries().iter().flatten())
            .all(|(a, b)| (a - b).abs() <= tol)
    }
}

fn fractions(m1: f64, m2: f64) -> Result<(f64, f64)> {
    if !(m1.is_finite() && m2.is_finite() && m1 > 0.0 && m2 > 0.0) {
        return Err(crate::error::invalid(
            "masses",
            format!("({m1}, {m2}) must be positive"),
        ));
    }
    let total = m1 + m2;
    Ok((m1 / total, m2 / total))
}

/// Matrix product of `maps` in the order written: `compose(&[A, B, C]) = A·B·C`.
pub fn compose(maps: &[LinearMap2]) -> Result<LinearMap2> {
    maps.iter()
        .try_fold(LinearMap2::identity(), |acc, m| acc.then_after(m))
}

pub fn invert(map: &LinearMap2) -> Result<LinearMap2> {
    map.inverse()
}
