//! Purity of a product Gaussian seen through different coordinate splits.

use scatent::purity::purity_numeric;
use scatent::transforms::{
    gaussian_purity_under_map, ie_purity, map_gaussian, schulman_residual, LinearMap2,
};
use scatent::wavepacket::GaussianProductState;

fn main() -> scatent::Result<()> {
    let (m1, m2) = (1.0, 2.0);
    let maps = [
        ("identity", LinearMap2::identity()),
        ("shear", LinearMap2::new(1.0, 0.5, 0.0, 1.0)?),
        ("centre of mass", LinearMap2::center_of_mass(m1, m2)?),
        ("reflection", LinearMap2::reflection(m1, m2)?),
    ];
    for ratio in [1.0, 2f64.sqrt(), 2.0] {
        let state = GaussianProductState::scattering(5.0, 0.0, 0.4, 0.4 * ratio, m1, m2)?;
        println!(
            "sigma2/sigma1 = {ratio:.4}  ie purity {:.6}  locus residual {:+.4}",
            ie_purity(&state),
            schulman_residual(&state)
        );
        for (name, map) in &maps {
            let closed = gaussian_purity_under_map(&state, map);
            let numeric = purity_numeric(&map_gaussian(&state, map, 192, 8.0)?)?.purity;
            println!("  {name:<15} closed {closed:.9}  sampled {numeric:.9}");
        }
    }
    Ok(())
}
