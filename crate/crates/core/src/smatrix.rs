//! Transmission and reflection amplitudes `t(q)`, `r(q)` of the relative-coordinate
//! problem `-ψ''/2m + V(x) ψ = q²/2m ψ` for a wave incident from the left.
//!
//! Every variant is symmetric about `x = 0`: the square barrier occupies
//! `[-L/2, L/2]` and the two deltas of [`PotentialModel::DoubleDelta`] sit at
//! `±d/2`. Amplitudes are referred to the origin, which fixes their phases.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Allowed deviation of `|t|² + |r|²` from one.
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

// Below this |k'²| L², cos and sin(k'L)/k' are taken from their series.
const SERIES_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PotentialModel {
    /// Impenetrable core: only reflection, `r = -1`.
    HardWall,
    /// `V(x) = λ δ(x)`.
    DeltaBarrier { strength: f64 },
    /// `V(x) = V0` on `|x| < L/2`; negative heights describe wells.
    SquareBarrier { height: f64, width: f64 },
    /// `V(x) = λ [δ(x - d/2) + δ(x + d/2)]`.
    DoubleDelta { strength: f64, separation: f64 },
}

impl PotentialModel {
    pub fn validate(&self) -> Result<()> {
        let finite = |name, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(invalid(name, format!("must be finite, got {v}")))
            }
        };
        let positive = |name, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(invalid(name, format!("must be finite and > 0, got {v}")))
            }
        };
        match *self {
            Self::HardWall => Ok(()),
            Self::DeltaBarrier { strength } => finite("strength", strength),
            Self::SquareBarrier { height, width } => {
                finite("height", height)?;
                positive("width", width)
            }
            Self::DoubleDelta {
                strength,
                separation,
            } => {
                finite("strength", strength)?;
                positive("separation", separation)
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::HardWall => "hard_wall",
            Self::DeltaBarrier { .. } => "delta_barrier",
            Self::SquareBarrier { .. } => "square_barrier",
            Self::DoubleDelta { .. } => "double_delta",
        }
    }

    /// Copy with the coupling (λ, or `V0` for the square barrier) replaced.
    pub fn with_strength(&self, value: f64) -> Result<Self> {
        let out = match *self {
            Self::HardWall => {
                return Err(Error::Unsupported(
                    "a hard wall has no strength parameter".into(),
                ))
            }
            Self::DeltaBarrier { .. } => Self::DeltaBarrier { strength: value },
            Self::SquareBarrier { width, .. } => Self::SquareBarrier {
                height: value,
                width,
            },
            Self::DoubleDelta { separation, .. } => Self::DoubleDelta {
                strength: value,
                separation,
            },
        };
        out.validate()?;
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudePair {
    pub t: Complex64,
    pub r: Complex64,
}

impl AmplitudePair {
    pub fn transmission(&self) -> f64 {
        self.t.norm_sqr()
    }

    pub fn reflection(&self) -> f64 {
        self.r.norm_sqr()
    }

    pub fn unitarity_defect(&self) -> f64 {
        (self.transmission() + self.reflection() - 1.0).abs()
    }
}

fn check_reduced_mass(m: f64) -> Result<()> {
    if m.is_finite() && m > 0.0 {
        Ok(())
    } else {
        Err(invalid(
            "reduced_mass",
            format!("must be finite and > 0, got {m}"),
        ))
    }
}

/// Closed-form amplitudes at relative momentum `q > 0` and reduced mass `m`.
pub fn amplitudes(model: &PotentialModel, q: f64, reduced_mass: f64) -> Result<AmplitudePair> {
    if !(q.is_finite() && q > 0.0) {
        return Err(Error::MomentumDomain(q));
    }
    check_reduced_mass(reduced_mass)?;
    model.validate()?;
    Ok(amplitudes_unchecked(model, q, reduced_mass))
}

pub(crate) fn amplitudes_unchecked(model: &PotentialModel, q: f64, m: f64) -> AmplitudePair {
    match *model {
        PotentialModel::HardWall => AmplitudePair {
            t: Complex64::new(0.0, 0.0),
            r: Complex64::new(-1.0, 0.0),
        },
        PotentialModel::DeltaBarrier { strength } => delta(m * strength / q),
        PotentialModel::DoubleDelta {
            strength,
            separation,
        } => {
            let single = delta(m * strength / q);
            let (tau, rho) = (single.t, single.r);
            let forward = Complex64::from_polar(1.0, q * separation);
            let round_trip = Complex64::new(1.0, 0.0) - rho * rho * forward * forward;
            AmplitudePair {
                t: tau * tau / round_trip,
                r: rho / forward + tau * tau * rho * forward / round_trip,
            }
        }
        PotentialModel::SquareBarrier { height, width } => square(q, m, height, width),
    }
}

fn delta(beta: f64) -> AmplitudePair {
    let d = Complex64::new(1.0, beta);
    AmplitudePair {
        t: 1.0 / d,
        r: Complex64::new(0.0, -beta) / d,
    }
}

fn square(q: f64, m: f64, height: f64, width: f64) -> AmplitudePair {
    // Squared wave number inside the barrier; negative under the barrier top.
    let k2 = q * q - 2.0 * m * height;
    let x = k2 * width * width;
    // `c` and `s` stand for cos(k'L) and sin(k'L)/k'; in the evanescent
    // branch both are divided by cosh(κL), and `scale` carries that factor.
    let (c, s, scale) = if x.abs() < SERIES_THRESHOLD {
        let c = 1.0 - x / 2.0 + x * x / 24.0 - x * x * x / 720.0;
        let s = width * (1.0 - x / 6.0 + x * x / 120.0 - x * x * x / 5040.0);
        (c, s, 1.0)
    } else if k2 > 0.0 {
        let kp = k2.sqrt();
        ((kp * width).cos(), (kp * width).sin() / kp, 1.0)
    } else {
        let kappa = (-k2).sqrt();
        let z = kappa * width;
        (1.0, z.tanh() / kappa, 1.0 / z.cosh())
    };
    let phase = Complex64::from_polar(1.0, -q * width);
    let denom = Complex64::new(2.0 * q * c, -(q * q + k2) * s);
    AmplitudePair {
        t: phase * (2.0 * q * scale) / denom,
        r: phase * Complex64::new(0.0, (k2 - q * q) * s) / denom,
    }
}

/// Separation at which the double delta transmits perfectly at momentum `q`.
///
/// Perfect transmission occurs when the round-trip phase `2 arg ρ + 2 q d` is
/// a multiple of `2π`; `order` selects the multiple. Errors if the resulting
/// separation is not positive.
pub fn resonant_separation(strength: f64, q: f64, reduced_mass: f64, order: u32) -> Result<f64> {
    if !(q.is_finite() && q > 0.0) {
        return Err(Error::MomentumDomain(q));
    }
    check_reduced_mass(reduced_mass)?;
    let rho = delta(reduced_mass * strength / q).r;
    if rho.norm() == 0.0 {
        return Err(invalid("strength", "a vanishing delta has no resonances"));
    }
    let d = (2.0 * PI * f64::from(order) - 2.0 * rho.arg()) / (2.0 * q);
    if d > 0.0 {
        Ok(d)
    } else {
        Err(invalid(
            "order",
            format!("gives non-positive separation {d}"),
        ))
    }
}

/// Amplitudes on a momentum grid with finite-difference derivatives.
#[derive(Debug, Clone)]
pub struct AmplitudeTable {
    pub q: Vec<f64>,
    pub t: Vec<Complex64>,
    pub r: Vec<Complex64>,
    pub dt_dq: Vec<Complex64>,
    pub dr_dq: Vec<Complex64>,
}

impl AmplitudeTable {
    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn max_unitarity_defect(&self) -> f64 {
        self.t
            .iter()
            .zip(&self.r)
            .map(|(t, r)| (t.norm_sqr() + r.norm_sqr() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Evaluate the amplitudes on a strictly positive ascending grid of at least
/// two nodes. Derivatives are centred differences over neighbouring nodes and
/// one-sided at the ends.
pub fn tabulate_amplitudes(
    model: &PotentialModel,
    q_grid: &[f64],
    reduced_mass: f64,
) -> Result<AmplitudeTable> {
    if q_grid.len() < 2 {
        return Err(invalid("q_grid", "needs at least two nodes"));
    }
    if let Some(&bad) = q_grid.iter().find(|q| !(q.is_finite() && **q > 0.0)) {
        return Err(Error::MomentumDomain(bad));
    }
    if q_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("q_grid", "must be strictly ascending"));
    }
    check_reduced_mass(reduced_mass)?;
    model.validate()?;
    let pairs: Vec<AmplitudePair> = q_grid
        .par_iter()
        .map(|&q| amplitudes_unchecked(model, q, reduced_mass))
        .collect();
    let t: Vec<Complex64> = pairs.iter().map(|p| p.t).collect();
    let r: Vec<Complex64> = pairs.iter().map(|p| p.r).collect();
    Ok(AmplitudeTable {
        dt_dq: differentiate(q_grid, &t),
        dr_dq: differentiate(q_grid, &r),
        q: q_grid.to_vec(),
        t,
        r,
    })
}

fn differentiate(x: &[f64], y: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let (lo, hi) = (i.saturating_sub(1), (i + 1).min(n - 1));
            (y[hi] - y[lo]) / (x[hi] - x[lo])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_models() -> Vec<PotentialModel> {
        vec![
            PotentialModel::HardWall,
            PotentialModel::DeltaBarrier { strength: 3.0 },
            PotentialModel::DeltaBarrier { strength: -2.0 },
            PotentialModel::SquareBarrier {
                height: 4.0,
                width: 1.5,
            },
            PotentialModel::SquareBarrier {
                height: -6.0,
                width: 0.7,
            },
            PotentialModel::DoubleDelta {
                strength: 2.0,
                separation: 1.3,
            },
        ]
    }

    #[test]
    fn hard_wall_reflects_with_fixed_phase() {
        for q in [1e-6, 0.3, 10.0, 1e6] {
            let a = amplitudes(&PotentialModel::HardWall, q, 0.7).unwrap();
            assert_eq!(a.t, Complex64::new(0.0, 0.0));
            assert_eq!(a.r, Complex64::new(-1.0, 0.0));
        }
    }

    #[test]
    fn domain_errors() {
        let m = PotentialModel::DeltaBarrier { strength: 1.0 };
        assert!(matches!(
            amplitudes(&m, 0.0, 1.0),
            Err(Error::MomentumDomain(_))
        ));
        assert!(matches!(
            amplitudes(&m, -1.0, 1.0),
            Err(Error::MomentumDomain(_))
        ));
        assert!(amplitudes(&m, 1.0, 0.0).is_err());
        let bad = PotentialModel::SquareBarrier {
            height: 1.0,
            width: 0.0,
        };
        assert!(amplitudes(&bad, 1.0, 1.0).is_err());
    }

    #[test]
    fn weak_delta_is_transparent() {
        let a = amplitudes(&PotentialModel::DeltaBarrier { strength: 0.0 }, 2.0, 1.0).unwrap();
        assert_eq!(a.t, Complex64::new(1.0, 0.0));
        assert_eq!(a.r.norm(), 0.0);
    }

    #[test]
    fn delta_half_transmission_point() {
        let (m, lambda) = (0.5, 5.0);
        let a = amplitudes(
            &PotentialModel::DeltaBarrier { strength: lambda },
            m * lambda,
            m,
        )
        .unwrap();
        assert!((a.transmission() - 0.5).abs() < 1e-15);
        let a = amplitudes(&PotentialModel::DeltaBarrier { strength: 5.0 }, 5.0, 0.5).unwrap();
        assert!((a.transmission() - 25.0 / 31.25).abs() < 1e-15);
    }

    #[test]
    fn strong_delta_approaches_hard_wall() {
        let a = amplitudes(&PotentialModel::DeltaBarrier { strength: 1e12 }, 3.0, 1.0).unwrap();
        assert!(a.t.norm() < 1e-11);
        assert!((a.r + 1.0).norm() < 1e-11);
    }

    #[test]
    fn unitarity_for_all_variants() {
        let q: Vec<f64> = (1..=400).map(|i| 0.025 * i as f64).collect();
        for model in all_models() {
            let tab = tabulate_amplitudes(&model, &q, 0.8).unwrap();
            assert!(
                tab.max_unitarity_defect() < UNITARITY_TOLERANCE,
                "{model:?}"
            );
        }
    }

    #[test]
    fn square_barrier_is_continuous_across_barrier_top() {
        let (m, v, l) = (0.5, 4.0, 1.2);
        let model = PotentialModel::SquareBarrier {
            height: v,
            width: l,
        };
        let q0 = (2.0 * m * v).sqrt();
        let at = amplitudes(&model, q0, m).unwrap();
        for dq in [1e-9, 1e-7, 1e-5] {
            for q in [q0 - dq, q0 + dq] {
                let a = amplitudes(&model, q, m).unwrap();
                assert!((a.t - at.t).norm() < 100.0 * dq, "{q}");
                assert!((a.r - at.r).norm() < 100.0 * dq, "{q}");
            }
        }
    }

    #[test]
    fn thin_square_barrier_tends_to_delta() {
        let (m, lambda, q) = (0.5, 3.0, 2.0);
        let width = 1e-6;
        let sq = amplitudes(
            &PotentialModel::SquareBarrier {
                height: lambda / width,
                width,
            },
            q,
            m,
        )
        .unwrap();
        let d = amplitudes(&PotentialModel::DeltaBarrier { strength: lambda }, q, m).unwrap();
        assert!((sq.t - d.t).norm() < 1e-4);
        assert!((sq.r - d.r).norm() < 1e-4);
    }

    #[test]
    fn tall_square_barrier_does_not_overflow() {
        let a = amplitudes(
            &PotentialModel::SquareBarrier {
                height: 1e6,
                width: 10.0,
            },
            1.0,
            1.0,
        )
        .unwrap();
        assert!(a.t.norm() < 1e-300 && a.unitarity_defect() < 1e-12);
    }

    #[test]
    fn resonance_gives_perfect_transmission() {
        for (lambda, order) in [(10.0, 2), (3.0, 0), (-4.0, 1)] {
            let d = resonant_separation(lambda, 5.0, 0.5, order).unwrap();
            let model = PotentialModel::DoubleDelta {
                strength: lambda,
                separation: d,
            };
            let a = amplitudes(&model, 5.0, 0.5).unwrap();
            assert!((a.transmission() - 1.0).abs() < 1e-12, "{lambda} {order}");
        }
        assert!(resonant_separation(-4.0, 5.0, 0.5, 0).is_err());
    }

    #[test]
    fn tabulation_rejects_bad_grids() {
        let m = PotentialModel::HardWall;
        assert!(tabulate_amplitudes(&m, &[1.0], 1.0).is_err());
        assert!(tabulate_amplitudes(&m, &[1.0, 1.0], 1.0).is_err());
        assert!(tabulate_amplitudes(&m, &[0.0, 1.0], 1.0).is_err());
    }

    #[test]
    fn hard_wall_table_is_flat() {
        let tab = tabulate_amplitudes(&PotentialModel::HardWall, &[0.5, 1.0, 3.0], 1.0).unwrap();
        assert!(tab.dt_dq.iter().chain(&tab.dr_dq).all(|d| d.norm() == 0.0));
    }

    #[test]
    fn derivative_of_delta_transmission() {
        let (m, lambda, q) = (0.5, 5.0, 5.0);
        let h = 1e-4;
        let tab = tabulate_amplitudes(
            &PotentialModel::DeltaBarrier { strength: lambda },
            &[q - h, q, q + h],
            m,
        )
        .unwrap();
        // t = q / (q + i mλ), so dt/dq = i mλ / (q + i mλ)².
        let z = Complex64::new(q, m * lambda);
        let exact = Complex64::new(0.0, m * lambda) / (z * z);
        assert!((tab.dt_dq[1] - exact).norm() < 1e-8);
    }

    #[test]
    fn serde_tags() {
        let m: PotentialModel =
            serde_json::from_str(r#"{"type":"double_delta","strength":2.0,"separation":1.0}"#)
                .unwrap();
        assert_eq!(
            m,
            PotentialModel::DoubleDelta {
                strength: 2.0,
                separation: 1.0
            }
        );
        let w: PotentialModel = serde_json::from_str(r#"{"type":"hard_wall"}"#).unwrap();
        assert_eq!(w, PotentialModel::HardWall);
    }
}
