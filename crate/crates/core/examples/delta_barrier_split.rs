//! Partial transmission through a delta barrier: transmitted and reflected
//! modes, their purities and the constant-amplitude estimate.

use scatent::scatter::{
    amplitude_variation_diagnostic, constant_amplitude_purity, out_state, qubit_model_purity,
    split_purity, InState, OutStateOptions,
};
use scatent::smatrix::{amplitudes, PotentialModel};
use scatent::wavepacket::GaussianProductState;

fn main() -> scatent::Result<()> {
    let state = GaussianProductState::scattering(5.0, 0.0, 0.5, 0.5, 1.0, 1.0)?;
    let model = PotentialModel::DeltaBarrier { strength: 5.0 };
    let out = out_state(&state.into(), &model, &OutStateOptions::default())?;
    let split = split_purity(&out)?;
    println!(
        "T = {:.6}  R = {:.6}  mode overlap {:.1e}",
        out.transmission, out.reflection, out.mode_overlap
    );
    println!(
        "p_tra {:.6} + p_ref {:.6} = {:.6}",
        split.p_tra,
        split.p_ref,
        split.p_tra + split.p_ref
    );
    println!(
        "p_out {:.6}  (residual {:.1e})",
        split.p_total,
        split.residual()
    );

    let at_k = amplitudes(&model, state.relative_momentum(), state.reduced_mass())?;
    let diag = amplitude_variation_diagnostic(&model, &InState::Gaussian(state))?;
    println!(
        "constant amplitude {:.6}  two-level {:.6}  diagnostic {:.4}",
        constant_amplitude_purity(&state, at_k.transmission(), at_k.reflection()),
        qubit_model_purity(out.transmission, out.reflection)?,
        diag.worst()
    );
    Ok(())
}
