use std::io::Write;

use serde::Serialize;

use super::config::{ExperimentConfig, OutputFormat};
use super::table::{format_float, SCHEMA_VERSION};
use super::CliError;
use crate::purity::{EPS_ORTH, SPLIT_TOLERANCE};
use crate::scatter::{
    ie_purity_invariance_check, out_state, split_purity, InState, IE_INVARIANCE_TOLERANCE,
    NORM_TOLERANCE, OVERLAP_LIMIT, RECEDING_MASS_LIMIT,
};
use crate::smatrix::{tabulate_amplitudes, UNITARITY_TOLERANCE};

/// Tolerance on the purity bounds `p_tra ≤ T²`, `p_ref ≤ R²`, `p ≤ 1`.
pub const BOUND_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Measured residual or value; absent if the check could not run.
    pub value: Option<f64>,
    pub limit: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub checks: Vec<CheckResult>,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &'static str, value: f64, limit: f64, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name,
            passed: value < limit,
            value: Some(value),
            limit,
            detail: detail.into(),
        });
    }

    fn fail(&mut self, name: &'static str, limit: f64, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name,
            passed: false,
            value: None,
            limit,
            detail: detail.into(),
        });
    }
}

/// Invariant suite at the configured point (any scan is ignored). Checks
/// that depend on the out-state are reported as failed when it cannot be
/// built.
pub fn check(config: &ExperimentConfig) -> Result<CheckReport, CliError> {
    let point = config.base_point()?;
    let state = point.state;
    let options = config.options();
    let mut report = CheckReport { checks: Vec::new() };

    report.push(
        "boundary_overlap",
        state.overlap_integral(),
        OVERLAP_LIMIT,
        "overlap integral of the incoming momentum distributions",
    );
    report.push(
        "boundary_receding_mass",
        state.receding_mass(),
        RECEDING_MASS_LIMIT,
        "probability of non-positive relative momentum",
    );

    let (q, dq) = (state.relative_momentum(), state.relative_momentum_spread());
    let lo = (q - config.grid.window * dq)
        .max(q * 1e-3)
        .max(f64::MIN_POSITIVE);
    let hi = q.max(lo) + config.grid.window * dq;
    let grid: Vec<f64> = (0..1000)
        .map(|i| lo + (hi - lo) * i as f64 / 999.0)
        .collect();
    match tabulate_amplitudes(&point.model, &grid, state.reduced_mass()) {
        Ok(tab) => report.push(
            "unitarity",
            tab.max_unitarity_defect(),
            UNITARITY_TOLERANCE,
            "max | |t|² + |r|² - 1 | over the in-state support",
        ),
        Err(e) => report.fail("unitarity", UNITARITY_TOLERANCE, e.to_string()),
    }

    match out_state(&InState::Gaussian(state), &point.model, &options) {
        Ok(out) => {
            report.push(
                "norm",
                out.norm_defect(),
                NORM_TOLERANCE,
                format!(
                    "T = {}, R = {}",
                    format_float(out.transmission),
                    format_float(out.reflection)
                ),
            );
            report.push(
                "mode_orthogonality",
                out.mode_overlap,
                EPS_ORTH,
                "relative overlap of transmitted and reflected parts",
            );
            match split_purity(&out) {
                Ok(s) => {
                    report.push(
                        "split_identity",
                        s.residual(),
                        SPLIT_TOLERANCE,
                        format!(
                            "p_total = {}, p_tra = {}, p_ref = {}",
                            format_float(s.p_total),
                            format_float(s.p_tra),
                            format_float(s.p_ref)
                        ),
                    );
                    let excess = (s.p_tra - out.transmission.powi(2))
                        .max(s.p_ref - out.reflection.powi(2))
                        .max(s.p_total - 1.0)
                        .max(0.0);
                    report.push(
                        "purity_bounds",
                        excess,
                        BOUND_TOLERANCE,
                        "largest excess over T², R² and 1",
                    );
                }
                Err(e) => {
                    report.fail("split_identity", SPLIT_TOLERANCE, e.to_string());
                    report.fail("purity_bounds", BOUND_TOLERANCE, "split purity unavailable");
                }
            }
        }
        Err(e) => {
            for (name, limit) in [
                ("norm", NORM_TOLERANCE),
                ("mode_orthogonality", EPS_ORTH),
                ("split_identity", SPLIT_TOLERANCE),
                ("purity_bounds", BOUND_TOLERANCE),
            ] {
                report.fail(name, limit, format!("out-state unavailable: {e}"));
            }
        }
    }

    match ie_purity_invariance_check(&state, &point.model, &options) {
        Ok(ie) => report.push(
            "ie_invariance",
            ie.difference(),
            IE_INVARIANCE_TOLERANCE,
            format!(
                "p_in = {}, p_out = {}",
                format_float(ie.p_in),
                format_float(ie.p_out)
            ),
        ),
        Err(e) => report.fail("ie_invariance", IE_INVARIANCE_TOLERANCE, e.to_string()),
    }
    Ok(report)
}

pub fn write_check<W: Write>(
    mut out: W,
    report: &CheckReport,
    format: OutputFormat,
) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    match format {
        OutputFormat::Json => {
            let doc = serde_json::json!({
                "schema_version": SCHEMA_VERSION,
                "table": "check",
                "all_passed": report.all_passed(),
                "checks": report.checks.iter().map(|c| serde_json::json!({
                    "name": c.name,
                    "passed": c.passed,
                    "value": c.value.map(format_float),
                    "limit": format_float(c.limit),
                    "detail": c.detail,
                })).collect::<Vec<_>>(),
            });
            serde_json::to_writer_pretty(&mut out, &doc)
                .map_err(|e| CliError::Io(e.to_string()))?;
            writeln!(out).map_err(io)
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let err = |e: csv::Error| CliError::Io(e.to_string());
            w.write_record(["check", "status", "value", "limit", "detail"])
                .map_err(err)?;
            for c in &report.checks {
                w.write_record([
                    c.name,
                    if c.passed { "pass" } else { "FAIL" },
                    &c.value.map(format_float).unwrap_or_default(),
                    &format_float(c.limit),
                    &c.detail,
                ])
                .map_err(err)?;
            }
            w.flush().map_err(io)
        }
    }
}
