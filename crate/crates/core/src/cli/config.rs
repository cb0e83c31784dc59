use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::scatter::OutStateOptions;
use crate::smatrix::PotentialModel;
use crate::wavepacket::{CoveragePolicy, GaussianProductState};

/// Largest number of points a scan may produce.
pub const MAX_SCAN_POINTS: usize = 100_000;

/// Head-on Gaussian in-state: particle 1 at `-a` moving with `+k`, particle 2
/// at `+a` moving with `-k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StateConfig {
    pub k: f64,
    pub a: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub m1: f64,
    pub m2: f64,
}

impl Default for StateConfig {
    fn default() -> Self {
        Self {
            k: 5.0,
            a: 0.0,
            sigma1: 0.5,
            sigma2: 0.5,
            m1: 1.0,
            m2: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub n: usize,
    pub window: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            n: 256,
            window: 8.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanAxis {
    /// `m2 / m1`, keeping `m1`.
    MassRatio,
    /// `σ2 / σ1`, keeping `σ1`.
    SigmaRatio,
    /// λ for delta potentials, `V0` for the square barrier.
    PotentialStrength,
    K,
}

impl ScanAxis {
    pub fn name(&self) -> &'static str {
        match self {
            Self::MassRatio => "mass_ratio",
            Self::SigmaRatio => "sigma_ratio",
            Self::PotentialStrength => "potential_strength",
            Self::K => "k",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub axis: ScanAxis,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl ScanConfig {
    /// `start + i·step` for every `i` with the value not past `stop`.
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        let ScanConfig {
            start, stop, step, ..
        } = *self;
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(CliError::Config("scan range must be finite".into()));
        }
        if stop < start || step <= 0.0 {
            return Err(CliError::Config(
                "scan needs start <= stop and step > 0".into(),
            ));
        }
        let span = (stop - start) / step;
        if span >= MAX_SCAN_POINTS as f64 {
            return Err(CliError::Config(format!(
                "scan would exceed {MAX_SCAN_POINTS} points"
            )));
        }
        let count = (span + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|i| start + i as f64 * step).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Written to standard output when absent.
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
}

/// Momentum range for the `amplitudes` table; defaults to the in-state
/// support `k ± window·Δq` clipped to positive momenta.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudeRange {
    pub q_min: f64,
    pub q_max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub state: StateConfig,
    pub potential: PotentialModel,
    pub grid: GridConfig,
    pub scan: Option<ScanConfig>,
    pub output: OutputConfig,
    pub amplitudes: Option<AmplitudeRange>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            state: StateConfig::default(),
            potential: PotentialModel::DeltaBarrier { strength: 5.0 },
            grid: GridConfig::default(),
            scan: None,
            output: OutputConfig::default(),
            amplitudes: None,
        }
    }
}

/// One fully specified computation.
#[derive(Debug, Clone, Copy)]
pub struct ScanPoint {
    pub value: Option<f64>,
    pub state: GaussianProductState,
    pub model: PotentialModel,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn options(&self) -> OutStateOptions {
        OutStateOptions {
            grid_n: self.grid.n,
            window: self.grid.window,
            coverage: CoveragePolicy::Error,
        }
    }

    fn build(
        &self,
        state: StateConfig,
        model: PotentialModel,
    ) -> Result<(GaussianProductState, PotentialModel), CliError> {
        let s = GaussianProductState::scattering(
            state.k,
            state.a,
            state.sigma1,
            state.sigma2,
            state.m1,
            state.m2,
        )
        .map_err(|e| CliError::Config(e.to_string()))?;
        model
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok((s, model))
    }

    /// The single point described by the config, ignoring any scan.
    pub fn base_point(&self) -> Result<ScanPoint, CliError> {
        self.validate_grid()?;
        let (state, model) = self.build(self.state, self.potential)?;
        Ok(ScanPoint {
            value: None,
            state,
            model,
        })
    }

    /// Every point of the scan in ascending order, or the base point alone.
    pub fn points(&self) -> Result<Vec<ScanPoint>, CliError> {
        let Some(scan) = self.scan else {
            return Ok(vec![self.base_point()?]);
        };
        self.validate_grid()?;
        scan.values()?
            .into_iter()
            .map(|v| {
                let mut st = self.state;
                let mut model = self.potential;
                match scan.axis {
                    ScanAxis::MassRatio => st.m2 = v * st.m1,
                    ScanAxis::SigmaRatio => st.sigma2 = v * st.sigma1,
                    ScanAxis::K => st.k = v,
                    ScanAxis::PotentialStrength => {
                        model = model
                            .with_strength(v)
                            .map_err(|e| CliError::Config(e.to_string()))?
                    }
                }
                let (state, model) = self.build(st, model)?;
                Ok(ScanPoint {
                    value: Some(v),
                    state,
                    model,
                })
            })
            .collect()
    }

    fn validate_grid(&self) -> Result<(), CliError> {
        if self.grid.n < 4 || self.grid.n > crate::purity::MAX_RDM_POINTS {
            return Err(CliError::Config(format!(
                "grid.n must lie in [4, {}]",
                crate::purity::MAX_RDM_POINTS
            )));
        }
        if !(self.grid.window.is_finite() && self.grid.window > 0.0) {
            return Err(CliError::Config("grid.window must be > 0".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        assert_eq!(
            ExperimentConfig::from_json("{}").unwrap(),
            ExperimentConfig::default()
        );
    }

    #[test]
    fn unknown_fields_are_config_errors() {
        let e = ExperimentConfig::from_json(r#"{"stat": {}}"#).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn scan_values_include_stop() {
        let scan = ScanConfig {
            axis: ScanAxis::MassRatio,
            start: 1.0,
            stop: 3.0,
            step: 0.1,
        };
        let v = scan.values().unwrap();
        assert_eq!(v.len(), 21);
        assert!((v[20] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn descending_scan_is_rejected() {
        let scan = ScanConfig {
            axis: ScanAxis::K,
            start: 3.0,
            stop: 1.0,
            step: 0.5,
        };
        assert!(scan.values().is_err());
    }

    #[test]
    fn scan_axes_modify_the_right_parameter() {
        let mut cfg = ExperimentConfig {
            scan: Some(ScanConfig {
                axis: ScanAxis::SigmaRatio,
                start: 2.0,
                stop: 2.0,
                step: 1.0,
            }),
            ..Default::default()
        };
        let p = cfg.points().unwrap();
        assert_eq!(p[0].state.sigma(), [0.5, 1.0]);
        cfg.potential = PotentialModel::HardWall;
        cfg.scan.as_mut().unwrap().axis = ScanAxis::PotentialStrength;
        assert!(cfg.points().is_err());
    }

    #[test]
    fn invalid_state_is_config_error() {
        let cfg = ExperimentConfig::from_json(r#"{"state": {"sigma1": -1}}"#).unwrap();
        assert_eq!(cfg.points().unwrap_err().exit_code(), 2);
    }
}
