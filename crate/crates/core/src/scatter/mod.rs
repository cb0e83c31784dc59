//! Out-states `φ_out = φ_tra + φ_ref` of a two-body collision, their exact
//! interparticle purities and the approximations that avoid the full
//! calculation.
//!
//! The transmitted part keeps the in-state momenta; the reflected part is the
//! in-state relabelled by the reflection map, which reverses the relative
//! momentum at fixed total momentum. The two parts occupy disjoint regions of
//! momentum space, so their purities add.

mod approx;
mod invariance;
mod out_state;

pub use approx::{
    amplitude_variation_diagnostic, constant_amplitude_purity, qubit_model_purity,
    VariationDiagnostic, VARIATION_THRESHOLD,
};
pub use invariance::{ie_purity_invariance_check, IeInvariance, IE_INVARIANCE_TOLERANCE};
pub use out_state::{
    out_state, split_purity, OutState, OutStateOptions, SplitPurity, NORM_TOLERANCE, OVERLAP_LIMIT,
    RECEDING_MASS_LIMIT,
};

use crate::wavepacket::{GaussianProductState, SampledWavefunction};

/// A state to be scattered.
#[derive(Debug, Clone, Copy)]
pub enum InState<'a> {
    Gaussian(GaussianProductState),
    /// Momentum-basis samples with the particle masses.
    Sampled {
        psi: &'a SampledWavefunction,
        m1: f64,
        m2: f64,
    },
}

impl From<GaussianProductState> for InState<'_> {
    fn from(state: GaussianProductState) -> Self {
        Self::Gaussian(state)
    }
}
