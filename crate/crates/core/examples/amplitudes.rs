//! Transmission and reflection amplitudes of the built-in potentials.

use scatent::smatrix::{amplitudes, resonant_separation, tabulate_amplitudes, PotentialModel};

fn main() -> scatent::Result<()> {
    let m = 0.5;
    let models = [
        PotentialModel::HardWall,
        PotentialModel::DeltaBarrier { strength: 5.0 },
        PotentialModel::SquareBarrier {
            height: 20.0,
            width: 0.4,
        },
        PotentialModel::DoubleDelta {
            strength: 10.0,
            separation: resonant_separation(10.0, 5.0, m, 2)?,
        },
    ];
    println!(
        "{:<15} {:>8} {:>8} {:>10}",
        "potential", "T(5)", "R(5)", "|dt/dq|"
    );
    for model in &models {
        let q: Vec<f64> = (0..=200).map(|i| 4.0 + 0.01 * i as f64).collect();
        let table = tabulate_amplitudes(model, &q, m)?;
        let at = amplitudes(model, 5.0, m)?;
        println!(
            "{:<15} {:>8.5} {:>8.5} {:>10.5}   max |t|²+|r|²-1 = {:.1e}",
            model.name(),
            at.transmission(),
            at.reflection(),
            table.dt_dq[100].norm(),
            table.max_unitarity_defect()
        );
    }
    Ok(())
}
