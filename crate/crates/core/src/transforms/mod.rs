//! Linear relabellings of the two momentum coordinates, `z = T p` with
//! `|det T| = 1`, and the closed-form Gaussian purities they induce.
//!
//! Each choice of `T` defines a new factorisation of the two-particle Hilbert
//! space; the interparticle split is `T = 1`, the centre-of-mass/relative
//! split is [`LinearMap2::center_of_mass`], and [`LinearMap2::reflection`] is
//! the active map produced by reversing the relative momentum.

mod formulas;
mod map;
mod resample;

pub use formulas::{gaussian_purity_under_map, ie_purity, reflection_purity, schulman_residual};
pub use map::{compose, invert, LinearMap2, DET_TOLERANCE, NUMERIC_DET_TOLERANCE};
pub use resample::{apply_map_to_sampled, map_gaussian, mapped_grids_for_gaussian, sample_mapped};
