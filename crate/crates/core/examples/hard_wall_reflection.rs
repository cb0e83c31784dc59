//! Entanglement generated by reflecting off an impenetrable wall, as a
//! function of the mass ratio.

use scatent::scatter::{out_state, split_purity, OutStateOptions};
use scatent::smatrix::PotentialModel;
use scatent::transforms::reflection_purity;
use scatent::wavepacket::GaussianProductState;

fn main() -> scatent::Result<()> {
    let options = OutStateOptions::default();
    println!("{:>6} {:>12} {:>12}", "m2/m1", "sampled", "closed form");
    for ratio in [0.25, 0.5, 1.0, 2.0, 3.0, 5.0] {
        let state = GaussianProductState::scattering(5.0, 0.0, 0.5, 0.5, 1.0, ratio)?;
        let out = out_state(&state.into(), &PotentialModel::HardWall, &options)?;
        let p = split_purity(&out)?.p_total;
        println!("{ratio:>6.2} {p:>12.9} {:>12.9}", reflection_purity(&state));
    }
    println!("9/sqrt(85) = {:.9}", 9.0 / 85f64.sqrt());
    Ok(())
}
