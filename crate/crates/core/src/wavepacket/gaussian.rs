use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Grid1D, TwoBodyAmplitude};
use crate::error::{invalid, Result};
use crate::numeric::normal_mass_outside;

/// Raw parameters of a separable two-particle Gaussian momentum state.
///
/// `k1, k2` are central momenta, `a1, a2` central positions, `sigma1, sigma2`
/// momentum standard deviations and `m1, m2` the masses (ħ = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    pub k1: f64,
    pub k2: f64,
    pub a1: f64,
    pub a2: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub m1: f64,
    pub m2: f64,
}

impl GaussianParams {
    /// Head-on scattering configuration: `k1 = -k2 = k`, `a2 = -a1 = a`.
    pub fn scattering(k: f64, a: f64, sigma1: f64, sigma2: f64, m1: f64, m2: f64) -> Self {
        Self {
            k1: k,
            k2: -k,
            a1: -a,
            a2: a,
            sigma1,
            sigma2,
            m1,
            m2,
        }
    }
}

/// Validated product state
/// `φ(p1, p2) = N1 N2 exp(i p1 a1 - (p1 - k1)²/4σ1²) exp(i p2 a2 - (p2 - k2)²/4σ2²)`
/// with `N_i = (2π σ_i²)^(-1/4)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianProductState {
    params: GaussianParams,
}

/// Validate parameters and build the state.
pub fn make_gaussian(params: GaussianParams) -> Result<GaussianProductState> {
    GaussianProductState::new(params)
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(invalid(
            name,
            format!("must be finite and > 0, got {value}"),
        ))
    }
}

fn finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite, got {value}")))
    }
}

impl GaussianProductState {
    pub fn new(params: GaussianParams) -> Result<Self> {
        positive("sigma1", params.sigma1)?;
        positive("sigma2", params.sigma2)?;
        positive("m1", params.m1)?;
        positive("m2", params.m2)?;
        finite("k1", params.k1)?;
        finite("k2", params.k2)?;
        finite("a1", params.a1)?;
        finite("a2", params.a2)?;
        Ok(Self { params })
    }

    pub fn scattering(k: f64, a: f64, sigma1: f64, sigma2: f64, m1: f64, m2: f64) -> Result<Self> {
        Self::new(GaussianParams::scattering(k, a, sigma1, sigma2, m1, m2))
    }

    pub fn params(&self) -> &GaussianParams {
        &self.params
    }

    pub fn k(&self) -> [f64; 2] {
        [self.params.k1, self.params.k2]
    }

    pub fn a(&self) -> [f64; 2] {
        [self.params.a1, self.params.a2]
    }

    pub fn sigma(&self) -> [f64; 2] {
        [self.params.sigma1, self.params.sigma2]
    }

    pub fn masses(&self) -> [f64; 2] {
        [self.params.m1, self.params.m2]
    }

    pub fn total_mass(&self) -> f64 {
        self.params.m1 + self.params.m2
    }

    /// Mass fractions `(μ1, μ2)`, `μ_i = m_i / (m1 + m2)`.
    pub fn mass_fractions(&self) -> (f64, f64) {
        let total = self.total_mass();
        (self.params.m1 / total, self.params.m2 / total)
    }

    pub fn reduced_mass(&self) -> f64 {
        self.params.m1 * self.params.m2 / self.total_mass()
    }

    /// `N_i = (2π σ_i²)^(-1/4)`.
    pub fn norm_constants(&self) -> [f64; 2] {
        let n = |s: f64| (2.0 * PI * s * s).powf(-0.25);
        [n(self.params.sigma1), n(self.params.sigma2)]
    }

    /// Closed-form norm; equal to one by construction.
    pub fn analytic_norm(&self) -> f64 {
        let [n1, n2] = self.norm_constants();
        let [s1, s2] = self.sigma();
        // ∫ exp(-(p-k)²/2σ²) dp = σ √(2π)
        n1 * n1 * s1 * (2.0 * PI).sqrt() * n2 * n2 * s2 * (2.0 * PI).sqrt()
    }

    pub fn particle1(&self, p: f64) -> Complex64 {
        single(p, self.params.k1, self.params.a1, self.params.sigma1)
    }

    pub fn particle2(&self, p: f64) -> Complex64 {
        single(p, self.params.k2, self.params.a2, self.params.sigma2)
    }

    /// `⟨P1 + P2⟩`.
    pub fn total_momentum(&self) -> f64 {
        self.params.k1 + self.params.k2
    }

    /// Mean relative momentum `⟨q⟩` with `q = μ2 p1 - μ1 p2`.
    pub fn relative_momentum(&self) -> f64 {
        let (mu1, mu2) = self.mass_fractions();
        mu2 * self.params.k1 - mu1 * self.params.k2
    }

    /// Standard deviation of `q = μ2 p1 - μ1 p2` for independent particles.
    pub fn relative_momentum_spread(&self) -> f64 {
        let (mu1, mu2) = self.mass_fractions();
        relative_spread(mu1, mu2, self.params.sigma1, self.params.sigma2)
    }

    /// Galilean boost by velocity `v`: `k_i -> k_i + m_i v`. Leaves `q` unchanged.
    pub fn galilean_boost(&self, velocity: f64) -> Self {
        let mut params = self.params;
        params.k1 += params.m1 * velocity;
        params.k2 += params.m2 * velocity;
        Self { params }
    }

    /// The same state seen from the frame where `⟨P⟩ = 0`.
    pub fn in_com_frame(&self) -> Self {
        self.galilean_boost(-self.total_momentum() / self.total_mass())
    }

    /// Per-axis grids covering `k_i ± window·σ_i`.
    pub fn default_grids(&self, n: usize, window: f64) -> Result<(Grid1D, Grid1D)> {
        let [k1, k2] = self.k();
        let [s1, s2] = self.sigma();
        Ok((
            Grid1D::centered(k1, window * s1, n)?,
            Grid1D::centered(k2, window * s2, n)?,
        ))
    }

    /// Probability mass of `|φ|²` lying outside the rectangle `grid1 × grid2`.
    pub fn tail_mass(&self, grid1: &Grid1D, grid2: &Grid1D) -> f64 {
        let [k1, k2] = self.k();
        let [s1, s2] = self.sigma();
        let out1 = normal_mass_outside(k1, s1, grid1.min(), grid1.max());
        let out2 = normal_mass_outside(k2, s2, grid2.min(), grid2.max());
        1.0 - (1.0 - out1) * (1.0 - out2)
    }

    /// `|∫ φ1(p) φ2(p) dp|` evaluated in closed form.
    ///
    /// Small values certify that the two momentum distributions are disjoint,
    /// i.e. the particles approach each other.
    pub fn overlap_integral(&self) -> f64 {
        let p = &self.params;
        let alpha = 0.25 / (p.sigma1 * p.sigma1);
        let beta = 0.25 / (p.sigma2 * p.sigma2);
        let gamma = alpha + beta;
        let phase_rate = p.a1 + p.a2;
        let [n1, n2] = self.norm_constants();
        let dk = p.k1 - p.k2;
        n1 * n2
            * (PI / gamma).sqrt()
            * (-alpha * beta / gamma * dk * dk - phase_rate * phase_rate / (4.0 * gamma)).exp()
    }

    /// Probability that the relative momentum is non-positive.
    pub fn receding_mass(&self) -> f64 {
        let q = self.relative_momentum();
        let dq = self.relative_momentum_spread();
        0.5 * libm::erfc(q / (dq * std::f64::consts::SQRT_2))
    }
}

pub(crate) fn relative_spread(mu1: f64, mu2: f64, sigma1: f64, sigma2: f64) -> f64 {
    ((mu2 * sigma1).powi(2) + (mu1 * sigma2).powi(2)).sqrt()
}

#[inline]
fn single(p: f64, k: f64, a: f64, sigma: f64) -> Complex64 {
    let norm = (2.0 * PI * sigma * sigma).powf(-0.25);
    let d = p - k;
    Complex64::from_polar(norm * (-d * d / (4.0 * sigma * sigma)).exp(), p * a)
}

impl TwoBodyAmplitude for GaussianProductState {
    #[inline]
    fn amplitude(&self, p1: f64, p2: f64) -> Complex64 {
        self.particle1(p1) * self.particle2(p2)
    }
}
