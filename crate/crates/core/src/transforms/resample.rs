use super::LinearMap2;
use crate::error::Result;
use crate::wavepacket::{
    Basis, CoveragePolicy, GaussianProductState, Grid1D, SampledWavefunction, TwoBodyAmplitude,
};

/// Sample `z ↦ f(T⁻¹ z)` on the given `z` grids. Exact for closed-form `f`.
pub fn sample_mapped<F: TwoBodyAmplitude + ?Sized>(
    f: &F,
    map: &LinearMap2,
    grid1: Grid1D,
    grid2: Grid1D,
) -> Result<SampledWavefunction> {
    let inv = map.inverse()?;
    let pulled = |z1: f64, z2: f64| {
        let [p1, p2] = inv.apply([z1, z2]);
        f.amplitude(p1, p2)
    };
    Ok(SampledWavefunction::sample(
        &pulled,
        grid1,
        grid2,
        Basis::Transformed,
    ))
}

/// Grids centred on `T k` with half-widths `window` times the standard
/// deviations of `z = T p` under `|φ|²`.
pub fn mapped_grids_for_gaussian(
    state: &GaussianProductState,
    map: &LinearMap2,
    n: usize,
    window: f64,
) -> Result<(Grid1D, Grid1D)> {
    let [[r, s], [t, u]] = map.entries();
    let [s1, s2] = state.sigma();
    let [c1, c2] = map.apply(state.k());
    let w1 = (r * r * s1 * s1 + s * s * s2 * s2).sqrt();
    let w2 = (t * t * s1 * s1 + u * u * s2 * s2).sqrt();
    Ok((
        Grid1D::centered(c1, window * w1, n)?,
        Grid1D::centered(c2, window * w2, n)?,
    ))
}

/// Closed-form transformed Gaussian `φ_G(T⁻¹ z)` on automatically sized grids.
pub fn map_gaussian(
    state: &GaussianProductState,
    map: &LinearMap2,
    n: usize,
    window: f64,
) -> Result<SampledWavefunction> {
    let (g1, g2) = mapped_grids_for_gaussian(state, map, n, window)?;
    sample_mapped(state, map, g1, g2)
}

/// Resample a sampled state as `φ̌(z) = φ(T⁻¹ z)` onto target grids using
/// bicubic interpolation.
///
/// Coverage is judged by the fraction of source probability whose image
/// `T p` falls outside the target rectangle.
pub fn apply_map_to_sampled(
    psi: &SampledWavefunction,
    map: &LinearMap2,
    grid1: Grid1D,
    grid2: Grid1D,
    policy: CoveragePolicy,
) -> Result<SampledWavefunction> {
    let total = psi.norm_squared();
    let lost = psi.mass_where(|p1, p2| {
        let [z1, z2] = map.apply([p1, p2]);
        !(grid1.contains(z1) && grid2.contains(z2))
    });
    policy.enforce(if total > 0.0 { lost / total } else { 0.0 })?;
    sample_mapped(psi, map, grid1, grid2)
}
