use log::warn;
use ndarray::{Array2, Axis, Zip};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GaussianProductState, Grid1D, TwoBodyAmplitude};
use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, CompensatedSum};

/// Tail mass allowed outside a sampling window before coverage is flagged.
pub const COVERAGE_TAIL_LIMIT: f64 = 1e-8;

/// Coordinates in which a sampled wave function is expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Momentum,
    Position,
    /// Momentum-type coordinates `z = T p` for some linear map `T`.
    Transformed,
}

/// What to do when a grid leaves more than [`COVERAGE_TAIL_LIMIT`] outside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoveragePolicy {
    #[default]
    Error,
    Warn,
}

impl CoveragePolicy {
    pub(crate) fn enforce(self, tail_mass: f64) -> Result<()> {
        if tail_mass <= COVERAGE_TAIL_LIMIT {
            return Ok(());
        }
        match self {
            CoveragePolicy::Error => Err(Error::Coverage {
                tail_mass,
                limit: COVERAGE_TAIL_LIMIT,
            }),
            CoveragePolicy::Warn => {
                warn!("grid leaves tail mass {tail_mass:.3e} uncovered");
                Ok(())
            }
        }
    }
}

/// Complex amplitudes on a rectangular grid. `values[[i, j]]` is the amplitude
/// at `(grid1.point(i), grid2.point(j))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWavefunction {
    grid1: Grid1D,
    grid2: Grid1D,
    values: Array2<Complex64>,
    basis: Basis,
    /// Lower corner of the conjugate lattice this state was Fourier
    /// transformed from, so an inverse transform lands back on it.
    pub(crate) conjugate_min: Option<[f64; 2]>,
}

impl SampledWavefunction {
    pub fn from_values(
        grid1: Grid1D,
        grid2: Grid1D,
        values: Array2<Complex64>,
        basis: Basis,
    ) -> Result<Self> {
        if values.dim() != (grid1.len(), grid2.len()) {
            return Err(Error::GridMismatch(format!(
                "value array {:?} does not match grids ({}, {})",
                values.dim(),
                grid1.len(),
                grid2.len()
            )));
        }
        if values
            .iter()
            .any(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::Numeric("non-finite amplitude".into()));
        }
        Ok(Self {
            grid1,
            grid2,
            values,
            basis,
            conjugate_min: None,
        })
    }

    /// Evaluate `f` at every node. Rows are filled in parallel.
    pub fn sample<F: TwoBodyAmplitude + ?Sized>(
        f: &F,
        grid1: Grid1D,
        grid2: Grid1D,
        basis: Basis,
    ) -> Self {
        let mut values = Array2::<Complex64>::zeros((grid1.len(), grid2.len()));
        let p2: Vec<f64> = grid2.points();
        Zip::indexed(values.axis_iter_mut(Axis(0))).par_for_each(|i, mut row| {
            let p1 = grid1.point(i);
            for (v, &q) in row.iter_mut().zip(&p2) {
                *v = f.amplitude(p1, q);
            }
        });
        Self {
            grid1,
            grid2,
            values,
            basis,
            conjugate_min: None,
        }
    }

    pub fn zeros_like(&self) -> Self {
        Self::with_parts(
            self.grid1,
            self.grid2,
            Array2::zeros(self.values.dim()),
            self.basis,
        )
    }

    pub fn grid1(&self) -> &Grid1D {
        &self.grid1
    }

    pub fn grid2(&self) -> &Grid1D {
        &self.grid2
    }

    pub fn grids(&self) -> (Grid1D, Grid1D) {
        (self.grid1, self.grid2)
    }

    pub fn values(&self) -> &Array2<Complex64> {
        &self.values
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub(crate) fn with_parts(
        grid1: Grid1D,
        grid2: Grid1D,
        values: Array2<Complex64>,
        basis: Basis,
    ) -> Self {
        debug_assert_eq!(values.dim(), (grid1.len(), grid2.len()));
        Self {
            grid1,
            grid2,
            values,
            basis,
            conjugate_min: None,
        }
    }

    pub(crate) fn values_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.values
    }

    pub(crate) fn set_grids(&mut self, grid1: Grid1D, grid2: Grid1D) {
        self.grid1 = grid1;
        self.grid2 = grid2;
    }

    /// `∫∫ |ψ|²` by the trapezoid rule.
    pub fn norm_squared(&self) -> f64 {
        let w1 = self.grid1.trapezoid_weights();
        let w2 = self.grid2.trapezoid_weights();
        let rows = self.values.outer_iter().zip(&w1).map(|(row, &a)| {
            a * row
                .iter()
                .zip(&w2)
                .map(|(v, &b)| b * v.norm_sqr())
                .sum::<f64>()
        });
        compensated_sum(rows)
    }

    /// `⟨self|other⟩` by the trapezoid rule; both states must share grids.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same_grids(other)?;
        let w1 = self.grid1.trapezoid_weights();
        let w2 = self.grid2.trapezoid_weights();
        let mut re = CompensatedSum::new();
        let mut im = CompensatedSum::new();
        for ((a, b), &wa) in self
            .values
            .outer_iter()
            .zip(other.values.outer_iter())
            .zip(&w1)
        {
            let row: Complex64 = a
                .iter()
                .zip(b.iter())
                .zip(&w2)
                .map(|((x, y), &wb)| x.conj() * y * wb)
                .sum();
            re.add(wa * row.re);
            im.add(wa * row.im);
        }
        Ok(Complex64::new(re.total(), im.total()))
    }

    pub(crate) fn check_same_grids(&self, other: &Self) -> Result<()> {
        if self.grid1.same_as(&other.grid1) && self.grid2.same_as(&other.grid2) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "{:?} x {:?} vs {:?} x {:?}",
                self.grid1, self.grid2, other.grid1, other.grid2
            )))
        }
    }

    /// Pointwise sum of two states on the same grids.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_grids(other)?;
        Ok(Self::with_parts(
            self.grid1,
            self.grid2,
            &self.values + &other.values,
            self.basis,
        ))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        out.values.mapv_inplace(|v| v * factor);
        out
    }

    /// Copy rescaled to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_squared();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::DegenerateState(norm));
        }
        Ok(self.scaled(Complex64::new(norm.sqrt().recip(), 0.0)))
    }

    /// Quadrature mass of `|ψ|²` over nodes where `predicate(p1, p2)` holds.
    pub fn mass_where(&self, predicate: impl Fn(f64, f64) -> bool) -> f64 {
        let w1 = self.grid1.trapezoid_weights();
        let w2 = self.grid2.trapezoid_weights();
        let mut acc = CompensatedSum::new();
        for (i, row) in self.values.outer_iter().enumerate() {
            let p1 = self.grid1.point(i);
            for (j, v) in row.iter().enumerate() {
                if predicate(p1, self.grid2.point(j)) {
                    acc.add(w1[i] * w2[j] * v.norm_sqr());
                }
            }
        }
        acc.total()
    }
}

/// Sample a Gaussian state, checking that the grids hold all but
/// [`COVERAGE_TAIL_LIMIT`] of its probability.
pub fn sample_on_grid(
    state: &GaussianProductState,
    grid1: Grid1D,
    grid2: Grid1D,
    policy: CoveragePolicy,
) -> Result<SampledWavefunction> {
    policy.enforce(state.tail_mass(&grid1, &grid2))?;
    Ok(SampledWavefunction::sample(
        state,
        grid1,
        grid2,
        Basis::Momentum,
    ))
}

/// Per-axis first and second moments of a sampled state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateStatistics {
    pub norm: f64,
    pub mean: [f64; 2],
    pub std: [f64; 2],
}

impl StateStatistics {
    /// Spread of `q = μ2 x1 - μ1 x2` for independent particles.
    pub fn relative_momentum_spread(&self, mu1: f64, mu2: f64) -> f64 {
        super::gaussian::relative_spread(mu1, mu2, self.std[0], self.std[1])
    }
}

/// Means and standard deviations of the two marginal distributions.
pub fn state_statistics(psi: &SampledWavefunction) -> Result<StateStatistics> {
    let norm = psi.norm_squared();
    if !(norm.is_finite() && norm > f64::MIN_POSITIVE) {
        return Err(Error::DegenerateState(norm));
    }
    let w1 = psi.grid1.trapezoid_weights();
    let w2 = psi.grid2.trapezoid_weights();
    let density = psi.values.mapv(|v| v.norm_sqr());
    let marginal1: Vec<f64> = density
        .outer_iter()
        .map(|row| compensated_sum(row.iter().zip(&w2).map(|(d, &w)| d * w)))
        .collect();
    let marginal2: Vec<f64> = density
        .axis_iter(Axis(1))
        .map(|col| compensated_sum(col.iter().zip(&w1).map(|(d, &w)| d * w)))
        .collect();
    let moments = |marginal: &[f64], grid: &Grid1D, w: &[f64]| {
        let mean = compensated_sum(
            marginal
                .iter()
                .zip(w)
                .enumerate()
                .map(|(i, (m, wi))| m * wi * grid.point(i)),
        ) / norm;
        let var = compensated_sum(marginal.iter().zip(w).enumerate().map(|(i, (m, wi))| {
            let d = grid.point(i) - mean;
            m * wi * d * d
        })) / norm;
        (mean, var.max(0.0).sqrt())
    };
    let (m1, s1) = moments(&marginal1, &psi.grid1, &w1);
    let (m2, s2) = moments(&marginal2, &psi.grid2, &w2);
    Ok(StateStatistics {
        norm,
        mean: [m1, m2],
        std: [s1, s2],
    })
}

// Cubic Lagrange weights for nodes 0..=3 at offset t.
#[inline]
fn cubic_weights(t: f64) -> [f64; 4] {
    [
        -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0,
        t * (t - 2.0) * (t - 3.0) / 2.0,
        -t * (t - 1.0) * (t - 3.0) / 2.0,
        t * (t - 1.0) * (t - 2.0) / 6.0,
    ]
}

// Stencil start and weights for coordinate x on grid g (None outside).
#[inline]
fn stencil(g: &Grid1D, x: f64) -> Option<(usize, [f64; 4], usize)> {
    if !g.contains(x) {
        return None;
    }
    let n = g.len();
    let u = (x - g.min()) / g.spacing();
    if n < 4 {
        let i = (u.floor() as usize).min(n - 2);
        let f = u - i as f64;
        return Some((i, [1.0 - f, f, 0.0, 0.0], 2));
    }
    let i = u.floor() as isize;
    let base = (i - 1).clamp(0, n as isize - 4) as usize;
    Some((base, cubic_weights(u - base as f64), 4))
}

/// Bicubic (tensor cubic Lagrange) interpolation; zero outside the grid.
impl TwoBodyAmplitude for SampledWavefunction {
    fn amplitude(&self, p1: f64, p2: f64) -> Complex64 {
        let (Some((b1, w1, l1)), Some((b2, w2, l2))) =
            (stencil(&self.grid1, p1), stencil(&self.grid2, p2))
        else {
            return Complex64::new(0.0, 0.0);
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, wa) in w1.iter().take(l1).enumerate() {
            let mut row = Complex64::new(0.0, 0.0);
            for (b, wb) in w2.iter().take(l2).enumerate() {
                row += self.values[[b1 + a, b2 + b]] * wb;
            }
            acc += row * wa;
        }
        acc
    }
}
