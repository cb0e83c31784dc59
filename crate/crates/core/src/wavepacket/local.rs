//! Operators that factor over the two particles and therefore leave the
//! interparticle purity unchanged.
//!
//! Sign conventions follow `⟨x|p⟩ = e^{-ipx} / √(2π)`: a translation by `a`
//! multiplies momentum amplitudes by `e^{ipa}` and moves `⟨x⟩` by `+a`, which
//! makes the `a_i` of a Gaussian state its central positions.

use std::f64::consts::PI;

use ndarray::{Array2, Axis, Zip};
use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use super::{Basis, Grid1D, SampledWavefunction};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LocalUnitary {
    /// Spatial translation of particle `i` by `a_i`.
    Translate { a1: f64, a2: f64 },
    /// Momentum shift of particle `i` by `b_i`.
    Boost { b1: f64, b2: f64 },
    /// Fourier transform between momentum and position amplitudes.
    Fourier,
}

impl LocalUnitary {
    /// Global translation of both particles by `a`.
    pub fn translate(a: f64) -> Self {
        Self::Translate { a1: a, a2: a }
    }

    /// Momentum shift of both particles by `b`.
    pub fn boost(b: f64) -> Self {
        Self::Boost { b1: b, b2: b }
    }

    /// Change of inertial frame by velocity `v`: `p_i -> p_i + m_i v`.
    pub fn galilean_boost(velocity: f64, m1: f64, m2: f64) -> Self {
        Self::Boost {
            b1: m1 * velocity,
            b2: m2 * velocity,
        }
    }
}

/// Apply a local unitary. Translations and boosts are exact: one of them is a
/// phase and the other a relabelling of the grid, depending on the basis.
pub fn apply_local_unitary(
    psi: &SampledWavefunction,
    op: LocalUnitary,
) -> Result<SampledWavefunction> {
    match (op, psi.basis()) {
        (_, Basis::Transformed) => Err(Error::Unsupported(
            "local unitaries act on momentum or position amplitudes only".into(),
        )),
        (LocalUnitary::Translate { a1, a2 }, Basis::Momentum) => Ok(phase(psi, a1, a2)),
        (LocalUnitary::Translate { a1, a2 }, Basis::Position) => Ok(shift(psi, a1, a2)),
        (LocalUnitary::Boost { b1, b2 }, Basis::Momentum) => Ok(shift(psi, b1, b2)),
        (LocalUnitary::Boost { b1, b2 }, Basis::Position) => Ok(phase(psi, -b1, -b2)),
        (LocalUnitary::Fourier, Basis::Momentum) => fourier(psi, Direction::ToPosition),
        (LocalUnitary::Fourier, Basis::Position) => fourier(psi, Direction::ToMomentum),
    }
}

// Multiply by exp(i (c1 x1 + c2 x2)).
fn phase(psi: &SampledWavefunction, c1: f64, c2: f64) -> SampledWavefunction {
    let mut out = psi.clone();
    let (g1, g2) = psi.grids();
    Zip::indexed(out.values_mut()).par_for_each(|(i, j), v| {
        *v *= Complex64::from_polar(1.0, c1 * g1.point(i) + c2 * g2.point(j));
    });
    out
}

fn shift(psi: &SampledWavefunction, d1: f64, d2: f64) -> SampledWavefunction {
    let mut out = psi.clone();
    let (g1, g2) = psi.grids();
    out.set_grids(g1.shifted(d1), g2.shifted(d2));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    ToPosition,
    ToMomentum,
}

/// The lattice conjugate to `grid`: spacing `2π / (n h)`, starting at `min`
/// or centred on zero when no origin is known.
fn conjugate_grid(grid: &Grid1D, min: Option<f64>) -> Result<Grid1D> {
    let n = grid.len();
    let h = 2.0 * PI / (n as f64 * grid.spacing());
    let start = min.unwrap_or(-((n / 2) as f64) * h);
    Grid1D::from_spacing(start, h, n)
}

fn fourier(psi: &SampledWavefunction, direction: Direction) -> Result<SampledWavefunction> {
    let (src1, src2) = psi.grids();
    let origin = psi.conjugate_min;
    let dst1 = conjugate_grid(&src1, origin.map(|o| o[0]))?;
    let dst2 = conjugate_grid(&src2, origin.map(|o| o[1]))?;

    let mut values = psi.values().clone();
    transform_axis(&mut values, Axis(1), &src2, &dst2, direction);
    transform_axis(&mut values, Axis(0), &src1, &dst1, direction);

    let basis = match direction {
        Direction::ToPosition => Basis::Position,
        Direction::ToMomentum => Basis::Momentum,
    };
    let mut out = SampledWavefunction::with_parts(dst1, dst2, values, basis);
    out.conjugate_min = Some([src1.min(), src2.min()]);
    Ok(out)
}

// One-dimensional continuous Fourier transform along `axis`, evaluated with an
// FFT between two mutually conjugate uniform lattices.
//
// To position:  ψ(x_j) = (2π)^{-1/2} Σ_m φ(p_m) e^{-i p_m x_j} Δp
// To momentum:  φ(p_m) = (2π)^{-1/2} Σ_j ψ(x_j) e^{+i p_m x_j} Δx
fn transform_axis(
    values: &mut Array2<Complex64>,
    axis: Axis,
    src: &Grid1D,
    dst: &Grid1D,
    direction: Direction,
) {
    let n = src.len();
    let (s0, ds) = (src.min(), src.spacing());
    let (d0, dd) = (dst.min(), dst.spacing());
    let sign = match direction {
        Direction::ToPosition => -1.0,
        Direction::ToMomentum => 1.0,
    };
    let scale = ds / (2.0 * PI).sqrt();
    // e^{sign i y_s d0} before, e^{sign i s0 j dd} after, with the lattice
    // product ds·dd = 2π/n folded into the FFT kernel.
    let pre: Vec<Complex64> = (0..n)
        .map(|m| Complex64::from_polar(1.0, sign * (s0 + m as f64 * ds) * d0))
        .collect();
    let post: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(scale, sign * s0 * j as f64 * dd))
        .collect();
    let fft_direction = match direction {
        Direction::ToPosition => FftDirection::Forward,
        Direction::ToMomentum => FftDirection::Inverse,
    };
    let fft = FftPlanner::new().plan_fft(n, fft_direction);

    Zip::from(values.lanes_mut(axis)).par_for_each(|mut lane| {
        let mut buf: Vec<Complex64> = lane.iter().zip(&pre).map(|(v, w)| v * w).collect();
        fft.process(&mut buf);
        for ((out, b), w) in lane.iter_mut().zip(buf).zip(&post) {
            *out = b * w;
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavepacket::{
        sample_on_grid, state_statistics, CoveragePolicy, GaussianProductState,
    };

    fn sampled(window: f64, n: usize) -> SampledWavefunction {
        let s = GaussianProductState::scattering(5.0, 10.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let (g1, g2) = s.default_grids(n, window).unwrap();
        sample_on_grid(&s, g1, g2, CoveragePolicy::Error).unwrap()
    }

    #[test]
    fn translation_keeps_density() {
        let psi = sampled(8.0, 64);
        let out = apply_local_unitary(&psi, LocalUnitary::translate(3.7)).unwrap();
        for (a, b) in psi.values().iter().zip(out.values()) {
            assert!((a.norm_sqr() - b.norm_sqr()).abs() < 1e-15);
        }
    }

    #[test]
    fn boost_shifts_means() {
        let psi = sampled(8.0, 128);
        let out = apply_local_unitary(&psi, LocalUnitary::boost(1.5)).unwrap();
        let (a, b) = (
            state_statistics(&psi).unwrap(),
            state_statistics(&out).unwrap(),
        );
        assert!((b.mean[0] - a.mean[0] - 1.5).abs() < 1e-12);
        assert!((b.mean[1] - a.mean[1] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn fourier_gives_minimum_uncertainty_position_packet() {
        let psi = sampled(32.0, 512);
        let x = apply_local_unitary(&psi, LocalUnitary::Fourier).unwrap();
        assert_eq!(x.basis(), Basis::Position);
        assert!((x.norm_squared() - 1.0).abs() < 1e-10);
        let st = state_statistics(&x).unwrap();
        assert!((st.std[0] - 0.5).abs() < 1e-6, "{:?}", st);
        assert!((st.std[1] - 0.5).abs() < 1e-6);
        // a2 = -a1 = 10
        assert!((st.mean[0] + 10.0).abs() < 1e-8);
        assert!((st.mean[1] - 10.0).abs() < 1e-8);
    }

    #[test]
    fn fourier_round_trip_is_identity() {
        let psi = sampled(8.0, 128);
        let x = apply_local_unitary(&psi, LocalUnitary::Fourier).unwrap();
        let back = apply_local_unitary(&x, LocalUnitary::Fourier).unwrap();
        assert_eq!(back.basis(), Basis::Momentum);
        assert!(back.grid1().same_as(psi.grid1()));
        for (a, b) in psi.values().iter().zip(back.values()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn transformed_basis_is_rejected() {
        let psi = sampled(8.0, 16);
        let (g1, g2) = psi.grids();
        let psi =
            SampledWavefunction::from_values(g1, g2, psi.values().clone(), Basis::Transformed)
                .unwrap();
        assert!(apply_local_unitary(&psi, LocalUnitary::Fourier).is_err());
    }
}
