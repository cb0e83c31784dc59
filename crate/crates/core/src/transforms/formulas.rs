//! Closed-form purities of Gaussian product states under linear relabellings
//! of the momentum coordinates.

use super::LinearMap2;
use crate::wavepacket::GaussianProductState;

/// Purity of the state `φ(T⁻¹ z)` with respect to the split `z = (z1, z2)`:
///
/// `σ1 σ2 / √((r²σ1² + s²σ2²)(t²σ1² + u²σ2²))`.
///
/// Depends only on the widths, never on central momenta, positions or masses.
pub fn gaussian_purity_under_map(state: &GaussianProductState, map: &LinearMap2) -> f64 {
    let [s1, s2] = state.sigma();
    purity_for_widths(s1, s2, map)
}

pub(crate) fn purity_for_widths(sigma1: f64, sigma2: f64, map: &LinearMap2) -> f64 {
    let [[r, s], [t, u]] = map.entries();
    let (a, b) = (sigma1 * sigma1, sigma2 * sigma2);
    sigma1 * sigma2 / ((r * r * a + s * s * b) * (t * t * a + u * u * b)).sqrt()
}

/// Purity with respect to the centre-of-mass / relative factorisation.
pub fn ie_purity(state: &GaussianProductState) -> f64 {
    let (mu1, mu2) = state.mass_fractions();
    let [s1, s2] = state.sigma();
    let (a, b) = (s1 * s1, s2 * s2);
    s1 * s2 / ((a + b) * (mu2 * mu2 * a + mu1 * mu1 * b)).sqrt()
}

/// Interparticle purity of the relative-momentum-reversed state `φ(M p)`.
pub fn reflection_purity(state: &GaussianProductState) -> f64 {
    let (mu1, mu2) = state.mass_fractions();
    let [s1, s2] = state.sigma();
    let (a, b) = (s1 * s1, s2 * s2);
    let d = mu1 - mu2;
    s1 * s2 / ((d * d * a + 4.0 * mu1 * mu1 * b) * (4.0 * mu2 * mu2 * a + d * d * b)).sqrt()
}

/// `(μ1/σ1² - μ2/σ2²) / (μ1/σ1² + μ2/σ2²)`, in `[-1, 1]` and zero exactly when
/// `m1/σ1² = m2/σ2²`. Negative when particle 2 is the "stiffer" one.
pub fn schulman_residual(state: &GaussianProductState) -> f64 {
    let (mu1, mu2) = state.mass_fractions();
    let [s1, s2] = state.sigma();
    let x = mu1 / (s1 * s1);
    let y = mu2 / (s2 * s2);
    (x - y) / (x + y)
}
