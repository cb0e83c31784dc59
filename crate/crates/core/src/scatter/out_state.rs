use num_complex::Complex64;
use serde::Serialize;

use super::InState;
use crate::error::{invalid, Error, Result};
use crate::numeric::normal_mass_outside;
use crate::purity::{mode_split_purity, relative_overlap, EPS_ORTH};
use crate::smatrix::{amplitudes_unchecked, AmplitudePair, PotentialModel};
use crate::transforms::LinearMap2;
use crate::wavepacket::{
    apply_local_unitary, state_statistics, Basis, CoveragePolicy, GaussianProductState, Grid1D,
    LocalUnitary, SampledWavefunction, TwoBodyAmplitude,
};

/// Largest overlap integral of the incoming momentum distributions.
pub const OVERLAP_LIMIT: f64 = 1e-6;
/// Largest in-state probability allowed at non-positive relative momentum.
pub const RECEDING_MASS_LIMIT: f64 = 1e-12;
/// Allowed `|T + R - ‖φ_in‖²|`.
pub const NORM_TOLERANCE: f64 = 1e-8;

/// Grid and coverage settings for out-state construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutStateOptions {
    /// Points per momentum axis.
    pub grid_n: usize,
    /// Half-width of each lobe in units of its standard deviation.
    pub window: f64,
    pub coverage: CoveragePolicy,
}

impl Default for OutStateOptions {
    fn default() -> Self {
        Self {
            grid_n: 256,
            window: 8.0,
            coverage: CoveragePolicy::Error,
        }
    }
}

/// Transmitted and reflected parts of `φ_out = S φ_in` on a common grid.
#[derive(Debug, Clone)]
pub struct OutState {
    pub phi_tra: SampledWavefunction,
    pub phi_ref: SampledWavefunction,
    /// `‖φ_tra‖²`.
    pub transmission: f64,
    /// `‖φ_ref‖²`.
    pub reflection: f64,
    /// `|⟨φ_tra|φ_ref⟩| / (‖φ_tra‖ ‖φ_ref‖)`, zero if either part vanishes.
    pub mode_overlap: f64,
    /// `‖φ_in‖²` of the state that was scattered.
    pub input_norm: f64,
    /// Velocity of the Galilean boost applied to reach `⟨P⟩ = 0`.
    pub com_velocity: f64,
    pub masses: [f64; 2],
}

impl OutState {
    pub fn norm_defect(&self) -> f64 {
        (self.transmission + self.reflection - self.input_norm).abs()
    }

    pub fn total(&self) -> Result<SampledWavefunction> {
        self.phi_tra.add(&self.phi_ref)
    }
}

/// Purities of the two modes and of their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitPurity {
    pub p_tra: f64,
    pub p_ref: f64,
    pub p_total: f64,
}

impl SplitPurity {
    pub fn residual(&self) -> f64 {
        (self.p_total - self.p_tra - self.p_ref).abs()
    }
}

/// `p(φ_tra + φ_ref)` together with `p(φ_tra)` and `p(φ_ref)`.
pub fn split_purity(out: &OutState) -> Result<SplitPurity> {
    if out.mode_overlap >= EPS_ORTH {
        return Err(Error::ModeOverlap {
            first: 0,
            second: 1,
            overlap: out.mode_overlap,
            tolerance: EPS_ORTH,
        });
    }
    let split = mode_split_purity(&[out.phi_tra.clone(), out.phi_ref.clone()])?;
    Ok(SplitPurity {
        p_tra: split.mode_purities[0],
        p_ref: split.mode_purities[1],
        p_total: split.total,
    })
}

/// Scatter a two-particle in-state off `model`.
///
/// `φ_tra(p) = t(q) φ_in(p)` and `φ_ref(p) = r(|q|) φ_in(M p)` with
/// `q = μ2 p1 - μ1 p2`, so the reflection amplitude is always taken at the
/// incident relative momentum. Gaussian inputs are evaluated in closed form;
/// sampled inputs (momentum basis) are interpolated. States with `⟨P⟩ ≠ 0`
/// are first boosted to the centre-of-mass frame.
pub fn out_state(
    input: &InState<'_>,
    model: &PotentialModel,
    options: &OutStateOptions,
) -> Result<OutState> {
    model.validate()?;
    if options.grid_n < 4 {
        return Err(invalid("grid_n", "needs at least 4 points"));
    }
    if !(options.window.is_finite() && options.window > 0.0) {
        return Err(invalid("window", "must be finite and > 0"));
    }
    match input {
        InState::Gaussian(state) => gaussian_out_state(state, model, options),
        InState::Sampled { psi, m1, m2 } => sampled_out_state(psi, *m1, *m2, model, options),
    }
}

pub(crate) fn check_gaussian_boundary(state: &GaussianProductState) -> Result<()> {
    let overlap = state.overlap_integral();
    if overlap >= OVERLAP_LIMIT {
        return Err(Error::BoundaryCondition(format!(
            "momentum overlap integral {overlap:.3e} is not below {OVERLAP_LIMIT:.0e}"
        )));
    }
    let receding = state.receding_mass();
    if receding >= RECEDING_MASS_LIMIT {
        return Err(Error::BoundaryCondition(format!(
            "probability {receding:.3e} at non-positive relative momentum"
        )));
    }
    Ok(())
}

/// Evaluates `t(q) φ(p)` and `r(|q|) φ(M p)` pointwise.
pub(crate) struct ScatteredAmplitude<'a, F: TwoBodyAmplitude + ?Sized> {
    pub(crate) input: &'a F,
    pub(crate) model: PotentialModel,
    pub(crate) reflection: LinearMap2,
    pub(crate) mu: (f64, f64),
    pub(crate) reduced_mass: f64,
}

impl<'a, F: TwoBodyAmplitude + ?Sized> ScatteredAmplitude<'a, F> {
    pub(crate) fn new(input: &'a F, model: PotentialModel, m1: f64, m2: f64) -> Result<Self> {
        let total = m1 + m2;
        Ok(Self {
            input,
            model,
            reflection: LinearMap2::reflection(m1, m2)?,
            mu: (m1 / total, m2 / total),
            reduced_mass: m1 * m2 / total,
        })
    }

    #[inline]
    fn pair(&self, p1: f64, p2: f64) -> Option<AmplitudePair> {
        let q = self.mu.1 * p1 - self.mu.0 * p2;
        (q != 0.0).then(|| amplitudes_unchecked(&self.model, q.abs(), self.reduced_mass))
    }

    pub(crate) fn transmitted(&self, p1: f64, p2: f64) -> Complex64 {
        match self.pair(p1, p2) {
            Some(a) if a.t != Complex64::new(0.0, 0.0) => a.t * self.input.amplitude(p1, p2),
            _ => Complex64::new(0.0, 0.0),
        }
    }

    pub(crate) fn reflected(&self, p1: f64, p2: f64) -> Complex64 {
        match self.pair(p1, p2) {
            Some(a) => {
                let [z1, z2] = self.reflection.apply([p1, p2]);
                a.r * self.input.amplitude(z1, z2)
            }
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub(crate) fn total(&self, p1: f64, p2: f64) -> Complex64 {
        self.transmitted(p1, p2) + self.reflected(p1, p2)
    }
}

// Standard deviations of the reflected lobe `p = M z`, `z` the in-state momenta.
fn reflected_spread(mu1: f64, mu2: f64, s1: f64, s2: f64) -> [f64; 2] {
    let d = mu1 - mu2;
    [
        (d * d * s1 * s1 + 4.0 * mu1 * mu1 * s2 * s2).sqrt(),
        (4.0 * mu2 * mu2 * s1 * s1 + d * d * s2 * s2).sqrt(),
    ]
}

/// Symmetric grids holding both the incoming lobe at `center` and its mirror
/// image at `-center` (the image of `M` in the centre-of-mass frame).
fn out_grids(
    center: [f64; 2],
    spread: [f64; 2],
    spread_ref: [f64; 2],
    options: &OutStateOptions,
) -> Result<(Grid1D, Grid1D)> {
    let half = |i: usize| center[i].abs() + options.window * spread[i].max(spread_ref[i]);
    Ok((
        Grid1D::centered(0.0, half(0), options.grid_n)?,
        Grid1D::centered(0.0, half(1), options.grid_n)?,
    ))
}

fn finish(
    phi_tra: SampledWavefunction,
    phi_ref: SampledWavefunction,
    input_norm: f64,
    com_velocity: f64,
    masses: [f64; 2],
) -> Result<OutState> {
    let transmission = phi_tra.norm_squared();
    let reflection = phi_ref.norm_squared();
    let mode_overlap =
        relative_overlap(&phi_tra, &phi_ref, transmission.sqrt(), reflection.sqrt())?;
    Ok(OutState {
        phi_tra,
        phi_ref,
        transmission,
        reflection,
        mode_overlap,
        input_norm,
        com_velocity,
        masses,
    })
}

fn gaussian_out_state(
    state: &GaussianProductState,
    model: &PotentialModel,
    options: &OutStateOptions,
) -> Result<OutState> {
    check_gaussian_boundary(state)?;
    let com_velocity = -state.total_momentum() / state.total_mass();
    let state = state.galilean_boost(com_velocity);
    let (mu1, mu2) = state.mass_fractions();
    let [s1, s2] = state.sigma();
    let spread_ref = reflected_spread(mu1, mu2, s1, s2);
    let (g1, g2) = out_grids(state.k(), [s1, s2], spread_ref, options)?;

    let [k1, k2] = state.k();
    let ref_center = LinearMap2::reflection(state.masses()[0], state.masses()[1])?.apply([k1, k2]);
    let tail = state.tail_mass(&g1, &g2)
        + normal_mass_outside(ref_center[0], spread_ref[0], g1.min(), g1.max())
        + normal_mass_outside(ref_center[1], spread_ref[1], g2.min(), g2.max());
    options.coverage.enforce(tail)?;

    let [m1, m2] = state.masses();
    let amp = ScatteredAmplitude::new(&state, *model, m1, m2)?;
    let tra = |p1: f64, p2: f64| amp.transmitted(p1, p2);
    let refl = |p1: f64, p2: f64| amp.reflected(p1, p2);
    let phi_tra = SampledWavefunction::sample(&tra, g1, g2, Basis::Momentum);
    let phi_ref = SampledWavefunction::sample(&refl, g1, g2, Basis::Momentum);
    let out = finish(
        phi_tra,
        phi_ref,
        state.analytic_norm(),
        com_velocity,
        [m1, m2],
    )?;
    if out.norm_defect() > NORM_TOLERANCE {
        return Err(Error::Numeric(format!(
            "T + R = {:.12} differs from the in-state norm; refine the grid",
            out.transmission + out.reflection
        )));
    }
    Ok(out)
}

fn sampled_out_state(
    psi: &SampledWavefunction,
    m1: f64,
    m2: f64,
    model: &PotentialModel,
    options: &OutStateOptions,
) -> Result<OutState> {
    if psi.basis() != Basis::Momentum {
        return Err(Error::Unsupported(
            "scattering needs momentum-basis amplitudes".into(),
        ));
    }
    let reflection = LinearMap2::reflection(m1, m2)?;
    let stats = state_statistics(psi)?;
    let total_mass = m1 + m2;
    let com_velocity = -(stats.mean[0] + stats.mean[1]) / total_mass;
    let psi = apply_local_unitary(psi, LocalUnitary::galilean_boost(com_velocity, m1, m2))?;
    let (mu1, mu2) = (m1 / total_mass, m2 / total_mass);

    let norm = stats.norm;
    let receding = psi.mass_where(|p1, p2| mu2 * p1 - mu1 * p2 <= 0.0) / norm;
    if receding >= RECEDING_MASS_LIMIT {
        return Err(Error::BoundaryCondition(format!(
            "fraction {receding:.3e} of the state has non-positive relative momentum"
        )));
    }

    let center = [
        stats.mean[0] + m1 * com_velocity,
        stats.mean[1] + m2 * com_velocity,
    ];
    let spread_ref = reflected_spread(mu1, mu2, stats.std[0], stats.std[1]);
    let (g1, g2) = out_grids(center, stats.std, spread_ref, options)?;
    let lost = psi.mass_where(|p1, p2| {
        let [z1, z2] = reflection.apply([p1, p2]);
        !(g1.contains(p1) && g2.contains(p2) && g1.contains(z1) && g2.contains(z2))
    });
    options.coverage.enforce(lost / norm)?;

    let amp = ScatteredAmplitude::new(&psi, *model, m1, m2)?;
    let tra = |p1: f64, p2: f64| amp.transmitted(p1, p2);
    let refl = |p1: f64, p2: f64| amp.reflected(p1, p2);
    let phi_tra = SampledWavefunction::sample(&tra, g1, g2, Basis::Momentum);
    let phi_ref = SampledWavefunction::sample(&refl, g1, g2, Basis::Momentum);
    finish(phi_tra, phi_ref, norm, com_velocity, [m1, m2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavepacket::sample_on_grid;

    fn options(n: usize) -> OutStateOptions {
        OutStateOptions {
            grid_n: n,
            ..Default::default()
        }
    }

    fn gaussian(k: f64, sigma: f64, m2: f64) -> GaussianProductState {
        GaussianProductState::scattering(k, 0.0, sigma, sigma, 1.0, m2).unwrap()
    }

    #[test]
    fn hard_wall_reflects_everything() {
        let s = gaussian(5.0, 0.5, 1.0);
        let out = out_state(&s.into(), &PotentialModel::HardWall, &options(128)).unwrap();
        assert_eq!(out.transmission, 0.0);
        assert!((out.reflection - 1.0).abs() < 1e-10);
        assert!(out.phi_tra.values().iter().all(|v| v.norm() == 0.0));
        let split = split_purity(&out).unwrap();
        assert!((split.p_total - 1.0).abs() < 1e-8);
        assert_eq!(split.p_tra, 0.0);
    }

    #[test]
    fn transparent_delta_leaves_state_unentangled() {
        let s = gaussian(5.0, 0.5, 1.0);
        let model = PotentialModel::DeltaBarrier { strength: 0.0 };
        let out = out_state(&s.into(), &model, &options(128)).unwrap();
        assert!((out.transmission - 1.0).abs() < 1e-10);
        assert_eq!(out.reflection, 0.0);
        assert!((split_purity(&out).unwrap().p_total - 1.0).abs() < 1e-8);
    }

    #[test]
    fn delta_barrier_probabilities() {
        let s = gaussian(5.0, 0.5, 1.0);
        let model = PotentialModel::DeltaBarrier { strength: 5.0 };
        let out = out_state(&s.into(), &model, &options(192)).unwrap();
        assert!(out.norm_defect() < 1e-10);
        assert!((out.transmission - 0.8).abs() < 0.01);
        assert!(out.mode_overlap < 1e-12);
    }

    #[test]
    fn moving_frame_is_boosted_first() {
        let s = gaussian(5.0, 0.5, 2.0);
        let moving = s.galilean_boost(1.3);
        let model = PotentialModel::DeltaBarrier { strength: 3.0 };
        let a = out_state(&s.into(), &model, &options(128)).unwrap();
        let b = out_state(&moving.into(), &model, &options(128)).unwrap();
        assert!((b.com_velocity + 1.3).abs() < 1e-12);
        assert!((a.transmission - b.transmission).abs() < 1e-12);
    }

    #[test]
    fn overlapping_supports_violate_boundary_condition() {
        let s = gaussian(1.0, 1.0, 1.0);
        let r = out_state(&s.into(), &PotentialModel::HardWall, &options(64));
        assert!(matches!(r, Err(Error::BoundaryCondition(_))));
    }

    #[test]
    fn narrow_window_is_a_coverage_error() {
        let s = gaussian(5.0, 0.5, 2.0);
        let opts = OutStateOptions {
            window: 2.0,
            ..options(64)
        };
        let r = out_state(&s.into(), &PotentialModel::HardWall, &opts);
        assert!(matches!(r, Err(Error::Coverage { .. })));
    }

    #[test]
    fn sampled_input_agrees_with_closed_form() {
        let s = gaussian(5.0, 0.5, 2.0);
        let (g1, g2) = s.default_grids(128, 9.0).unwrap();
        let psi = sample_on_grid(&s, g1, g2, CoveragePolicy::Error).unwrap();
        let model = PotentialModel::DeltaBarrier { strength: 4.0 };
        let exact = out_state(&s.into(), &model, &options(160)).unwrap();
        let input = InState::Sampled {
            psi: &psi,
            m1: 1.0,
            m2: 2.0,
        };
        let approx = out_state(&input, &model, &options(160)).unwrap();
        assert!((exact.transmission - approx.transmission).abs() < 1e-5);
        let pe = split_purity(&exact).unwrap().p_total;
        let pa = split_purity(&approx).unwrap().p_total;
        assert!((pe - pa).abs() < 1e-5, "{pe} {pa}");
    }

    #[test]
    fn position_samples_are_rejected() {
        let g = Grid1D::centered(0.0, 5.0, 16).unwrap();
        let psi = SampledWavefunction::sample(
            &|_: f64, _: f64| Complex64::new(1.0, 0.0),
            g,
            g,
            Basis::Position,
        );
        let input = InState::Sampled {
            psi: &psi,
            m1: 1.0,
            m2: 1.0,
        };
        assert!(matches!(
            out_state(&input, &PotentialModel::HardWall, &options(32)),
            Err(Error::Unsupported(_))
        ));
    }
}
