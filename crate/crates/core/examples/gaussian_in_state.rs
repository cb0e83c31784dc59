//! Build a head-on Gaussian pair, sample it and confirm it is a product state.

use scatent::purity::purity_numeric;
use scatent::wavepacket::{sample_on_grid, state_statistics, CoveragePolicy, GaussianProductState};

fn main() -> scatent::Result<()> {
    let state = GaussianProductState::scattering(5.0, 0.0, 0.5, 0.8, 1.0, 2.0)?;
    println!("relative momentum  {:.4}", state.relative_momentum());
    println!("relative spread    {:.4}", state.relative_momentum_spread());
    println!("support overlap    {:.3e}", state.overlap_integral());
    println!("receding fraction  {:.3e}", state.receding_mass());

    let (g1, g2) = state.default_grids(128, 8.0)?;
    let psi = sample_on_grid(&state, g1, g2, CoveragePolicy::Error)?;
    let stats = state_statistics(&psi)?;
    println!("sampled norm       {:.12}", stats.norm);
    println!("sampled means      {:.6?}", stats.mean);
    println!("sampled widths     {:.6?}", stats.std);
    println!("purity             {:.12}", purity_numeric(&psi)?.purity);
    Ok(())
}
