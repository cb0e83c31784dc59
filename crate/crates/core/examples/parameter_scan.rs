//! Drive a scan through the configuration layer and print the table as CSV.

use scatent::cli::{run, write_run, ExperimentConfig, OutputFormat};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = ExperimentConfig::from_json(
        r#"{
            "state": { "k": 5.0, "sigma1": 0.5, "sigma2": 0.5 },
            "potential": { "type": "delta_barrier", "strength": 1.0 },
            "grid": { "n": 96 },
            "scan": { "axis": "potential_strength", "start": 0.0, "stop": 20.0, "step": 2.5 }
        }"#,
    )?;
    let rows = run(&config)?;
    write_run(std::io::stdout().lock(), &rows, OutputFormat::Csv)?;
    Ok(())
}
