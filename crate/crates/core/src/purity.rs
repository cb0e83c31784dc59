//! Interparticle purity `Tr ρ1²` of sampled two-particle wave functions.
//!
//! The default path builds the one-particle reduced density matrix
//! `ρ1(x, x') = ∫ ψ(x, y) ψ*(x', y) dy` explicitly (O(N³) work, O(N²) memory)
//! and takes `Tr ρ1² = ∫∫ |ρ1(x, x')|² dx dx'`. The four-fold integral is kept
//! as [`purity_direct`], a slow oracle limited to small grids.
//!
//! All quadratures use trapezoid weights. Each matrix entry is a fixed-order
//! sum, and reductions over rows are compensated and ordered, so results do
//! not depend on the number of worker threads.

use nalgebra::{DMatrix, SymmetricEigen};
use ndarray::{Array2, Axis, Zip};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, CompensatedSum};
use crate::wavepacket::{Basis, Grid1D, SampledWavefunction};

/// Allowed deviation of `‖ψ‖²` from one for the checked entry points.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;
/// Relative overlap below which two modes count as orthogonal.
pub const EPS_ORTH: f64 = 1e-6;
/// Allowed `|p(Σ f_i) - Σ p(f_i)|` for orthogonal modes.
pub const SPLIT_TOLERANCE: f64 = 1e-7;
/// Largest axis length accepted by the explicit reduced density matrix.
pub const MAX_RDM_POINTS: usize = 2048;
/// Largest axis length accepted by the O(N⁴) oracle.
pub const DIRECT_ORACLE_LIMIT: usize = 64;

/// Which particle is traced out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Particle {
    First,
    Second,
}

/// `ρ(x, x')` on the grid of the particle that was kept.
#[derive(Debug, Clone)]
pub struct ReducedDensityMatrix {
    grid: Grid1D,
    entries: Array2<Complex64>,
    weights: Vec<f64>,
}

impl ReducedDensityMatrix {
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        compensated_sum(
            self.weights
                .iter()
                .enumerate()
                .map(|(i, w)| w * self.entries[[i, i]].re),
        )
    }

    /// `∫∫ |ρ(x, x')|² dx dx'`.
    pub fn purity(&self) -> f64 {
        let w = &self.weights;
        let rows: Vec<f64> = self
            .entries
            .outer_iter()
            .zip(w)
            .map(|(row, &wi)| {
                wi * row
                    .iter()
                    .zip(w)
                    .map(|(v, &wj)| wj * v.norm_sqr())
                    .sum::<f64>()
            })
            .collect();
        compensated_sum(rows)
    }

    /// `max |ρ(x, x') - ρ*(x', x)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.grid.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.entries[[i, j]] - self.entries[[j, i]].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues of ρ as an operator (with quadrature weights), largest
    /// first. Diagnostic only; purity never needs them.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.grid.len();
        let sw: Vec<f64> = self.weights.iter().map(|w| w.sqrt()).collect();
        let h = DMatrix::from_fn(n, n, |i, j| self.entries[[i, j]] * (sw[i] * sw[j]));
        let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }
}

fn check_normalized(psi: &SampledWavefunction) -> Result<f64> {
    let norm = psi.norm_squared();
    if !norm.is_finite() || (norm - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::NotNormalized {
            norm,
            tolerance: NORMALIZATION_TOLERANCE,
        });
    }
    Ok(norm)
}

/// Reduced density matrix of a normalized state with `traced` integrated out.
pub fn reduced_density_matrix(
    psi: &SampledWavefunction,
    traced: Particle,
) -> Result<ReducedDensityMatrix> {
    check_normalized(psi)?;
    build_rdm(psi, traced)
}

fn build_rdm(psi: &SampledWavefunction, traced: Particle) -> Result<ReducedDensityMatrix> {
    let (g1, g2) = psi.grids();
    for g in [g1, g2] {
        if g.len() > MAX_RDM_POINTS {
            return Err(Error::TooLarge {
                n: g.len(),
                limit: MAX_RDM_POINTS,
            });
        }
    }
    // Rows of `b` are indexed by the kept coordinate; columns by the traced
    // one, pre-scaled by the square root of its quadrature weight.
    let (kept, traced_grid, oriented) = match traced {
        Particle::Second => (g1, g2, psi.values().view()),
        Particle::First => (g2, g1, psi.values().t()),
    };
    let sw: Vec<f64> = traced_grid
        .trapezoid_weights()
        .iter()
        .map(|w| w.sqrt())
        .collect();
    let mut b = Array2::<Complex64>::zeros((kept.len(), traced_grid.len()));
    Zip::from(b.rows_mut())
        .and(oriented.rows())
        .for_each(|mut dst, src| {
            for ((d, s), w) in dst.iter_mut().zip(src.iter()).zip(&sw) {
                *d = s * w;
            }
        });

    let n = kept.len();
    let mut entries = Array2::<Complex64>::zeros((n, n));
    Zip::indexed(entries.axis_iter_mut(Axis(0))).par_for_each(|i, mut row| {
        let bi = b.row(i);
        let bi = bi.as_slice().expect("standard layout");
        for (k, out) in row.iter_mut().enumerate() {
            let bk = b.row(k);
            *out = dot_conj(bi, bk.as_slice().expect("standard layout"));
        }
    });
    Ok(ReducedDensityMatrix {
        grid: kept,
        weights: kept.trapezoid_weights(),
        entries,
    })
}

// Σ a_j conj(b_j), fixed summation order.
#[inline]
fn dot_conj(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        re += x.re * y.re + x.im * y.im;
        im += x.im * y.re - x.re * y.im;
    }
    Complex64::new(re, im)
}

/// Purity together with the diagnostics it was computed from.
#[derive(Debug, Clone, Serialize)]
pub struct PurityReport {
    pub purity: f64,
    /// `Tr ρ1`, which equals `‖ψ‖²`.
    pub trace_check: f64,
    pub grid1: Grid1D,
    pub grid2: Grid1D,
    pub basis: Basis,
    /// Leading eigenvalues of ρ1, filled in by [`purity_with_spectrum`].
    pub spectrum: Option<Vec<f64>>,
}

/// Interparticle purity of a normalized sampled state.
///
/// The formula is the same in every basis; momentum, position and
/// transformed-coordinate samples are all accepted.
pub fn purity_numeric(psi: &SampledWavefunction) -> Result<PurityReport> {
    check_normalized(psi)?;
    let rdm = build_rdm(psi, Particle::Second)?;
    Ok(PurityReport {
        purity: rdm.purity(),
        trace_check: rdm.trace(),
        grid1: *psi.grid1(),
        grid2: *psi.grid2(),
        basis: psi.basis(),
        spectrum: None,
    })
}

/// [`purity_numeric`] plus the `count` largest eigenvalues of ρ1.
pub fn purity_with_spectrum(psi: &SampledWavefunction, count: usize) -> Result<PurityReport> {
    check_normalized(psi)?;
    let rdm = build_rdm(psi, Particle::Second)?;
    let mut ev = rdm.eigenvalues();
    ev.truncate(count);
    Ok(PurityReport {
        purity: rdm.purity(),
        trace_check: rdm.trace(),
        grid1: *psi.grid1(),
        grid2: *psi.grid2(),
        basis: psi.basis(),
        spectrum: Some(ev),
    })
}

/// The four-fold purity integral evaluated on an unnormalized state; scales
/// as `‖ψ‖⁴`. Used for modes, whose norms are the transition probabilities.
pub fn raw_purity(psi: &SampledWavefunction) -> Result<f64> {
    Ok(build_rdm(psi, Particle::Second)?.purity())
}

/// Direct O(N⁴) evaluation of
/// `∫ ψ(x1, y1) ψ*(x2, y1) ψ(x2, y2) ψ*(x1, y2)` without forming ρ.
pub fn purity_direct(psi: &SampledWavefunction) -> Result<f64> {
    let (g1, g2) = psi.grids();
    let n = g1.len().max(g2.len());
    if n > DIRECT_ORACLE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: DIRECT_ORACLE_LIMIT,
        });
    }
    let v = psi.values();
    let w1 = g1.trapezoid_weights();
    let w2 = g2.trapezoid_weights();
    let mut acc = CompensatedSum::new();
    for x1 in 0..g1.len() {
        for x2 in 0..g1.len() {
            let mut re = 0.0;
            for y1 in 0..g2.len() {
                for y2 in 0..g2.len() {
                    let term = v[[x1, y1]] * v[[x2, y1]].conj() * v[[x2, y2]] * v[[x1, y2]].conj();
                    re += w2[y1] * w2[y2] * term.re;
                }
            }
            acc.add(w1[x1] * w1[x2] * re);
        }
    }
    Ok(acc.total())
}

/// Result of splitting a state into orthogonal modes.
#[derive(Debug, Clone, Serialize)]
pub struct ModeSplit {
    pub mode_purities: Vec<f64>,
    pub sum: f64,
    /// Purity of the summed state.
    pub total: f64,
    /// Largest pairwise relative overlap `|⟨f_i|f_j⟩| / (‖f_i‖ ‖f_j‖)`.
    pub max_overlap: f64,
}

impl ModeSplit {
    pub fn residual(&self) -> f64 {
        (self.total - self.sum).abs()
    }
}

/// Purity of `Σ f_i` compared with `Σ p(f_i)` for pairwise orthogonal modes
/// sharing one grid.
pub fn mode_split_purity(modes: &[SampledWavefunction]) -> Result<ModeSplit> {
    let first = modes
        .first()
        .ok_or_else(|| crate::error::invalid("modes", "need at least one mode"))?;
    let norms: Vec<f64> = modes.iter().map(|m| m.norm_squared().sqrt()).collect();
    let mut max_overlap = 0.0f64;
    for i in 0..modes.len() {
        for j in i + 1..modes.len() {
            let overlap = relative_overlap(&modes[i], &modes[j], norms[i], norms[j])?;
            if overlap >= EPS_ORTH {
                return Err(Error::ModeOverlap {
                    first: i,
                    second: j,
                    overlap,
                    tolerance: EPS_ORTH,
                });
            }
            max_overlap = max_overlap.max(overlap);
        }
    }
    let mode_purities = modes.iter().map(raw_purity).collect::<Result<Vec<_>>>()?;
    let combined = modes[1..]
        .iter()
        .try_fold(first.clone(), |acc, m| acc.add(m))?;
    let total = raw_purity(&combined)?;
    let sum = compensated_sum(mode_purities.iter().copied());
    if (total - sum).abs() > SPLIT_TOLERANCE {
        return Err(Error::SplitMismatch { total, sum });
    }
    Ok(ModeSplit {
        mode_purities,
        sum,
        total,
        max_overlap,
    })
}

pub(crate) fn relative_overlap(
    a: &SampledWavefunction,
    b: &SampledWavefunction,
    norm_a: f64,
    norm_b: f64,
) -> Result<f64> {
    let ip = a.inner(b)?.norm();
    Ok(if norm_a > 0.0 && norm_b > 0.0 {
        ip / (norm_a * norm_b)
    } else {
        0.0
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavepacket::{sample_on_grid, CoveragePolicy, GaussianProductState};

    fn product_state(n: usize) -> SampledWavefunction {
        let s = GaussianProductState::scattering(2.0, 1.0, 0.6, 1.1, 1.0, 1.0).unwrap();
        let (g1, g2) = s.default_grids(n, 8.0).unwrap();
        sample_on_grid(&s, g1, g2, CoveragePolicy::Error).unwrap()
    }

    // Two separable Gaussian blobs at (±c, ∓c) with probabilities w and 1 - w.
    fn two_modes(w: f64, n: usize) -> (SampledWavefunction, SampledWavefunction) {
        let g = Grid1D::centered(0.0, 12.0, n).unwrap();
        let a = GaussianProductState::scattering(6.0, 0.0, 0.5, 0.5, 1.0, 1.0).unwrap();
        let b = GaussianProductState::scattering(-6.0, 0.0, 0.5, 0.5, 1.0, 1.0).unwrap();
        let fa = SampledWavefunction::sample(&a, g, g, Basis::Momentum)
            .scaled(Complex64::new(w.sqrt(), 0.0));
        let fb = SampledWavefunction::sample(&b, g, g, Basis::Momentum)
            .scaled(Complex64::new((1.0 - w).sqrt(), 0.0));
        (fa, fb)
    }

    #[test]
    fn separable_state_has_unit_purity_and_rank_one() {
        let psi = product_state(128);
        let rep = purity_with_spectrum(&psi, 3).unwrap();
        assert!((rep.purity - 1.0).abs() < 1e-8);
        assert!((rep.trace_check - 1.0).abs() < 1e-10);
        let ev = rep.spectrum.unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-6);
        assert!(ev[1].abs() < 1e-8);
    }

    #[test]
    fn rdm_is_hermitian_with_unit_trace() {
        let rdm = reduced_density_matrix(&product_state(96), Particle::First).unwrap();
        assert_eq!(rdm.hermiticity_defect(), 0.0);
        assert!((rdm.trace() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn both_partial_traces_agree() {
        let (a, b) = two_modes(0.7, 128);
        let psi = a.add(&b).unwrap();
        let p1 = reduced_density_matrix(&psi, Particle::First)
            .unwrap()
            .purity();
        let p2 = reduced_density_matrix(&psi, Particle::Second)
            .unwrap()
            .purity();
        assert!((p1 - p2).abs() < 1e-8);
    }

    #[test]
    fn equal_superposition_of_disjoint_modes() {
        let (a, b) = two_modes(0.5, 128);
        let psi = a.add(&b).unwrap();
        let rep = purity_with_spectrum(&psi, 3).unwrap();
        assert!((rep.purity - 0.5).abs() < 1e-6);
        let ev = rep.spectrum.unwrap();
        assert!((ev[0] - 0.5).abs() < 1e-6 && (ev[1] - 0.5).abs() < 1e-6);
        assert!(ev[2].abs() < 1e-8);
    }

    #[test]
    fn unnormalized_input_is_rejected() {
        let psi = product_state(64).scaled(Complex64::new(1.1, 0.0));
        assert!(matches!(
            purity_numeric(&psi),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn mode_split_adds_squared_weights() {
        let (a, b) = two_modes(0.7, 128);
        let split = mode_split_purity(&[a.clone(), b]).unwrap();
        assert!((split.sum - 0.58).abs() < 1e-8);
        assert!(split.residual() < 1e-10);
        let single = mode_split_purity(&[a]).unwrap();
        assert_eq!(single.sum, single.total);
    }

    #[test]
    fn overlapping_modes_are_rejected() {
        let g = Grid1D::centered(0.0, 10.0, 96).unwrap();
        let a = GaussianProductState::scattering(0.0, 0.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let b = GaussianProductState::new(crate::wavepacket::GaussianParams {
            k1: 2.0 * (2.0 * 2f64.ln()).sqrt(),
            ..*a.params()
        })
        .unwrap();
        let fa = SampledWavefunction::sample(&a, g, g, Basis::Momentum);
        let fb = SampledWavefunction::sample(&b, g, g, Basis::Momentum);
        match mode_split_purity(&[fa, fb]) {
            Err(Error::ModeOverlap { overlap, .. }) => assert!((overlap - 0.5).abs() < 1e-6),
            other => panic!("expected overlap error, got {other:?}"),
        }
    }

    #[test]
    fn direct_oracle_refuses_large_grids() {
        assert!(matches!(
            purity_direct(&product_state(65)),
            Err(Error::TooLarge { .. })
        ));
    }
}
