//! Reduced density matrix of an entangled pair: trace, purity and spectrum.

use num_complex::Complex64;
use scatent::purity::{purity_direct, purity_with_spectrum, reduced_density_matrix, Particle};
use scatent::wavepacket::{apply_local_unitary, Basis, Grid1D, LocalUnitary, SampledWavefunction};

fn bump(p: f64, centre: f64) -> f64 {
    (-(p - centre) * (p - centre)).exp()
}

fn main() -> scatent::Result<()> {
    let grid = Grid1D::centered(0.0, 6.0, 64)?;
    let pair = |p1: f64, p2: f64| {
        Complex64::new(
            bump(p1, 1.5) * bump(p2, -1.5) + 0.6 * bump(p1, -1.5) * bump(p2, 1.5),
            0.0,
        )
    };
    let psi = SampledWavefunction::sample(&pair, grid, grid, Basis::Momentum).normalized()?;

    let rho = reduced_density_matrix(&psi, Particle::Second)?;
    println!("trace              {:.12}", rho.trace());
    println!("hermiticity defect {:.2e}", rho.hermiticity_defect());
    let report = purity_with_spectrum(&psi, 4)?;
    println!("purity             {:.12}", report.purity);
    println!("direct sum         {:.12}", purity_direct(&psi)?);
    println!(
        "leading weights    {:.6?}",
        report.spectrum.unwrap_or_default()
    );

    let moved = apply_local_unitary(&psi, LocalUnitary::Translate { a1: 2.0, a2: -1.0 })?;
    let position = apply_local_unitary(&moved, LocalUnitary::Fourier)?;
    println!(
        "after local moves  {:.12}",
        purity_with_spectrum(&position, 0)?.purity
    );
    Ok(())
}
