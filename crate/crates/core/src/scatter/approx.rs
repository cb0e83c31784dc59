use serde::Serialize;

use super::InState;
use crate::error::{invalid, Result};
use crate::smatrix::{tabulate_amplitudes, PotentialModel};
use crate::transforms::reflection_purity;
use crate::wavepacket::{state_statistics, GaussianProductState};

/// Diagnostic values above this invalidate the constant-amplitude approximation.
pub const VARIATION_THRESHOLD: f64 = 0.1;

/// `T² + R² p(φ_in(M p))`: the out-state purity when `t` and `r` are
/// constant over the momentum support of the in-state.
pub fn constant_amplitude_purity(
    state: &GaussianProductState,
    transmission: f64,
    reflection: f64,
) -> f64 {
    transmission * transmission + reflection * reflection * reflection_purity(state)
}

/// Purity `T² + R²` of `ρ1 = diag(T, R)`, the two-level picture in which
/// each particle only records whether it was transmitted or reflected.
pub fn qubit_model_purity(transmission: f64, reflection: f64) -> Result<f64> {
    for (name, v) in [("transmission", transmission), ("reflection", reflection)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(invalid(name, format!("must lie in [0, 1], got {v}")));
        }
    }
    if (transmission + reflection - 1.0).abs() > 1e-8 {
        return Err(invalid(
            "transmission",
            format!("T + R = {} must equal 1", transmission + reflection),
        ));
    }
    Ok(transmission * transmission + reflection * reflection)
}

/// Relative variation of the amplitudes across the in-state:
/// `Δq |∂t/∂q| / |t|` at the mean relative momentum, and the same for `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VariationDiagnostic {
    pub relative_momentum: f64,
    pub relative_spread: f64,
    /// `None` when `|t| < 1e-12` at the mean momentum.
    pub transmission: Option<f64>,
    /// `None` when `|r| < 1e-12` at the mean momentum.
    pub reflection: Option<f64>,
}

impl VariationDiagnostic {
    /// Largest available ratio.
    pub fn worst(&self) -> f64 {
        self.transmission
            .into_iter()
            .chain(self.reflection)
            .fold(0.0, f64::max)
    }

    pub fn supports_constant_amplitude(&self) -> bool {
        self.worst() < VARIATION_THRESHOLD
    }
}

/// Step of the centred difference, relative to the momentum spread.
const DIFFERENCE_STEP: f64 = 1e-4;

/// Amplitudes below this modulus count as vanishing.
const VANISHING_AMPLITUDE: f64 = 1e-12;

pub fn amplitude_variation_diagnostic(
    model: &PotentialModel,
    input: &InState<'_>,
) -> Result<VariationDiagnostic> {
    let (q, dq, reduced_mass) = match input {
        InState::Gaussian(s) => (
            s.relative_momentum(),
            s.relative_momentum_spread(),
            s.reduced_mass(),
        ),
        InState::Sampled { psi, m1, m2 } => {
            let stats = state_statistics(psi)?;
            let (mu1, mu2) = (m1 / (m1 + m2), m2 / (m1 + m2));
            (
                mu2 * stats.mean[0] - mu1 * stats.mean[1],
                stats.relative_momentum_spread(mu1, mu2),
                m1 * m2 / (m1 + m2),
            )
        }
    };
    let h = DIFFERENCE_STEP * dq;
    let tab = tabulate_amplitudes(model, &[q - h, q, q + h], reduced_mass)?;
    let ratio = |value: num_complex::Complex64, slope: num_complex::Complex64| {
        (value.norm() > VANISHING_AMPLITUDE).then(|| dq * slope.norm() / value.norm())
    };
    Ok(VariationDiagnostic {
        relative_momentum: q,
        relative_spread: dq,
        transmission: ratio(tab.t[1], tab.dt_dq[1]),
        reflection: ratio(tab.r[1], tab.dr_dq[1]),
    })
}
