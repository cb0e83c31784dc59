//! Two-particle in-states: the parametric Gaussian product family, sampled
//! wave functions on rectangular grids, and the local unitaries that act on
//! them without changing interparticle entanglement.

mod gaussian;
mod grid;
mod local;
mod sampled;

use num_complex::Complex64;

pub use gaussian::{make_gaussian, GaussianParams, GaussianProductState};
pub use grid::Grid1D;
pub use local::{apply_local_unitary, LocalUnitary};
pub use sampled::{
    sample_on_grid, state_statistics, Basis, CoveragePolicy, SampledWavefunction, StateStatistics,
    COVERAGE_TAIL_LIMIT,
};

/// A two-particle amplitude that can be evaluated at any coordinate pair.
pub trait TwoBodyAmplitude: Sync {
    fn amplitude(&self, x1: f64, x2: f64) -> Complex64;
}

impl<F> TwoBodyAmplitude for F
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    fn amplitude(&self, x1: f64, x2: f64) -> Complex64 {
        self(x1, x2)
    }
}

/// `|∫ φ1(p) φ2(p) dp|` for a Gaussian product state.
pub fn overlap_integral(state: &GaussianProductState) -> f64 {
    state.overlap_integral()
}
