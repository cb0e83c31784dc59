use serde::Serialize;

use super::out_state::{check_gaussian_boundary, OutStateOptions, ScatteredAmplitude};
use crate::error::Result;
use crate::purity::purity_numeric;
use crate::smatrix::PotentialModel;
use crate::transforms::{ie_purity, sample_mapped, LinearMap2};
use crate::wavepacket::{GaussianProductState, Grid1D};

/// Allowed `|p_IE(in) - p_IE(out)|`.
pub const IE_INVARIANCE_TOLERANCE: f64 = 1e-6;

/// Purity across the centre-of-mass/relative split before and after scattering.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IeInvariance {
    pub p_in: f64,
    pub p_out: f64,
    /// Closed-form value for the in-state.
    pub analytic: f64,
}

impl IeInvariance {
    pub fn difference(&self) -> f64 {
        (self.p_in - self.p_out).abs()
    }

    pub fn holds(&self) -> bool {
        self.difference() < IE_INVARIANCE_TOLERANCE
    }
}

/// Sample the in- and out-states in `(P, q)` coordinates and compare their
/// numeric purities. The `q` axis is symmetric so that it holds both the
/// incoming and the reflected relative momenta.
pub fn ie_purity_invariance_check(
    state: &GaussianProductState,
    model: &PotentialModel,
    options: &OutStateOptions,
) -> Result<IeInvariance> {
    model.validate()?;
    check_gaussian_boundary(state)?;
    let state = state.in_com_frame();
    let [m1, m2] = state.masses();
    let tcm = LinearMap2::center_of_mass(m1, m2)?;
    let [s1, s2] = state.sigma();
    let spread_total = (s1 * s1 + s2 * s2).sqrt();
    let q0 = state.relative_momentum();
    let grid_total = Grid1D::centered(0.0, options.window * spread_total, options.grid_n)?;
    let grid_rel = Grid1D::centered(
        0.0,
        q0.abs() + options.window * state.relative_momentum_spread(),
        options.grid_n,
    )?;

    let before = sample_mapped(&state, &tcm, grid_total, grid_rel)?;
    let amp = ScatteredAmplitude::new(&state, *model, m1, m2)?;
    let after = sample_mapped(
        &|p1: f64, p2: f64| amp.total(p1, p2),
        &tcm,
        grid_total,
        grid_rel,
    )?;
    Ok(IeInvariance {
        p_in: purity_numeric(&before)?.purity,
        p_out: purity_numeric(&after)?.purity,
        analytic: ie_purity(&state),
    })
}
