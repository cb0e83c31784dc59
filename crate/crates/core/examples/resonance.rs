//! A double delta tuned to a sharp transmission resonance: the amplitudes
//! vary across the wavepacket and the constant-amplitude estimate fails.

use scatent::scatter::{
    amplitude_variation_diagnostic, constant_amplitude_purity, ie_purity_invariance_check,
    out_state, split_purity, InState, OutStateOptions,
};
use scatent::smatrix::{amplitudes, resonant_separation, PotentialModel};
use scatent::wavepacket::GaussianProductState;

fn main() -> scatent::Result<()> {
    let options = OutStateOptions {
        grid_n: 512,
        ..Default::default()
    };
    for sigma in [0.05, 0.1, 0.25, 0.5] {
        let state = GaussianProductState::scattering(5.0, 0.0, sigma, sigma, 1.0, 1.0)?;
        let (q, m) = (state.relative_momentum(), state.reduced_mass());
        let model = PotentialModel::DoubleDelta {
            strength: 10.0,
            separation: resonant_separation(10.0, q, m, 2)?,
        };
        let at_k = amplitudes(&model, q, m)?;
        let exact = split_purity(&out_state(&state.into(), &model, &options)?)?.p_total;
        let approx = constant_amplitude_purity(&state, at_k.transmission(), at_k.reflection());
        let diag = amplitude_variation_diagnostic(&model, &InState::Gaussian(state))?;
        let ie = ie_purity_invariance_check(&state, &model, &options)?;
        println!(
            "sigma {sigma:.2}: diagnostic {:>7.3}  exact {exact:.6}  constant amplitude {approx:.6}  ie in/out {:.6}/{:.6}",
            diag.worst(),
            ie.p_in,
            ie.p_out
        );
    }
    Ok(())
}
