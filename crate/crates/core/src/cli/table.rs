use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, OutputFormat, ScanPoint};
use super::CliError;
use crate::scatter::{
    amplitude_variation_diagnostic, constant_amplitude_purity, out_state, qubit_model_purity,
    split_purity, InState, OutStateOptions,
};
use crate::smatrix::{amplitudes, tabulate_amplitudes};
use crate::transforms::{ie_purity, reflection_purity, schulman_residual};

/// Bumped whenever columns are added, removed or reordered.
pub const SCHEMA_VERSION: u32 = 1;

pub const RUN_COLUMNS: [&str; 16] = [
    "scan_value",
    "T",
    "R",
    "p_exact",
    "p_const_amp",
    "p_qubit",
    "p_reflection",
    "schulman_residual",
    "ie_purity",
    "p_tra",
    "p_ref",
    "split_residual",
    "mode_overlap",
    "norm_defect",
    "variation_t",
    "variation_r",
];

pub const AMPLITUDE_COLUMNS: [&str; 9] = [
    "q",
    "t_re",
    "t_im",
    "r_re",
    "r_im",
    "T",
    "R",
    "dt_dq_abs",
    "dr_dq_abs",
];

/// One scan point. `T` and `R` are the exact mode norms; `p_const_amp` uses
/// `|t|²` and `|r|²` at the mean relative momentum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResultRow {
    pub scan_value: Option<f64>,
    #[serde(rename = "T")]
    pub transmission: f64,
    #[serde(rename = "R")]
    pub reflection: f64,
    pub p_exact: f64,
    pub p_const_amp: f64,
    pub p_qubit: f64,
    pub p_reflection: f64,
    pub schulman_residual: f64,
    pub ie_purity: f64,
    pub p_tra: f64,
    pub p_ref: f64,
    pub split_residual: f64,
    pub mode_overlap: f64,
    pub norm_defect: f64,
    pub variation_t: Option<f64>,
    pub variation_r: Option<f64>,
}

impl ResultRow {
    fn cells(&self) -> [Option<f64>; 16] {
        [
            self.scan_value,
            Some(self.transmission),
            Some(self.reflection),
            Some(self.p_exact),
            Some(self.p_const_amp),
            Some(self.p_qubit),
            Some(self.p_reflection),
            Some(self.schulman_residual),
            Some(self.ie_purity),
            Some(self.p_tra),
            Some(self.p_ref),
            Some(self.split_residual),
            Some(self.mode_overlap),
            Some(self.norm_defect),
            self.variation_t,
            self.variation_r,
        ]
    }
}

/// Everything reported for one configured point.
pub fn compute_row(point: &ScanPoint, options: &OutStateOptions) -> crate::Result<ResultRow> {
    let state = &point.state;
    let out = out_state(&InState::Gaussian(*state), &point.model, options)?;
    let split = split_purity(&out)?;
    let at_mean = amplitudes(
        &point.model,
        state.relative_momentum(),
        state.reduced_mass(),
    )?;
    let diag = amplitude_variation_diagnostic(&point.model, &InState::Gaussian(*state))?;
    let (t, r) = (out.transmission, out.reflection);
    Ok(ResultRow {
        scan_value: point.value,
        transmission: t,
        reflection: r,
        p_exact: split.p_total,
        p_const_amp: constant_amplitude_purity(state, at_mean.transmission(), at_mean.reflection()),
        // Mode norms carry quadrature error of order 1e-12; rescale so the
        // two-level model sees an exact probability pair.
        p_qubit: qubit_model_purity(t / (t + r), r / (t + r))?,
        p_reflection: reflection_purity(state),
        schulman_residual: schulman_residual(state),
        ie_purity: ie_purity(state),
        p_tra: split.p_tra,
        p_ref: split.p_ref,
        split_residual: split.residual(),
        mode_overlap: out.mode_overlap,
        norm_defect: out.norm_defect(),
        variation_t: diag.transmission,
        variation_r: diag.reflection,
    })
}

/// All rows of the configured scan, ordered by scan value.
pub fn run(config: &ExperimentConfig) -> Result<Vec<ResultRow>, CliError> {
    let points = config.points()?;
    let options = config.options();
    points
        .par_iter()
        .map(|p| compute_row(p, &options).map_err(CliError::Numeric))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmplitudeRow {
    pub q: f64,
    pub t_re: f64,
    pub t_im: f64,
    pub r_re: f64,
    pub r_im: f64,
    #[serde(rename = "T")]
    pub transmission: f64,
    #[serde(rename = "R")]
    pub reflection: f64,
    pub dt_dq_abs: f64,
    pub dr_dq_abs: f64,
}

impl AmplitudeRow {
    fn cells(&self) -> [Option<f64>; 9] {
        [
            self.q,
            self.t_re,
            self.t_im,
            self.r_re,
            self.r_im,
            self.transmission,
            self.reflection,
            self.dt_dq_abs,
            self.dr_dq_abs,
        ]
        .map(Some)
    }
}

/// `t(q)`, `r(q)` of the configured potential at the configured reduced mass.
pub fn amplitude_table(config: &ExperimentConfig) -> Result<Vec<AmplitudeRow>, CliError> {
    let point = config.base_point()?;
    let state = point.state;
    let (q_min, q_max, points) = match config.amplitudes {
        Some(r) => (r.q_min, r.q_max, r.points),
        None => {
            let (q, dq) = (state.relative_momentum(), state.relative_momentum_spread());
            let w = config.grid.window;
            ((q - w * dq).max(q * 1e-3), q + w * dq, 1001)
        }
    };
    if !(q_min > 0.0 && q_max > q_min && points >= 2 && q_max.is_finite()) {
        return Err(CliError::Config(
            "amplitudes need 0 < q_min < q_max and at least 2 points".into(),
        ));
    }
    let h = (q_max - q_min) / (points - 1) as f64;
    let q: Vec<f64> = (0..points).map(|i| q_min + i as f64 * h).collect();
    let tab =
        tabulate_amplitudes(&point.model, &q, state.reduced_mass()).map_err(CliError::Numeric)?;
    Ok((0..tab.len())
        .map(|i| AmplitudeRow {
            q: tab.q[i],
            t_re: tab.t[i].re,
            t_im: tab.t[i].im,
            r_re: tab.r[i].re,
            r_im: tab.r[i].im,
            transmission: tab.t[i].norm_sqr(),
            reflection: tab.r[i].norm_sqr(),
            dt_dq_abs: tab.dt_dq[i].norm(),
            dr_dq_abs: tab.dr_dq[i].norm(),
        })
        .collect())
}

/// Twelve significant digits, scientific notation.
pub fn format_float(v: f64) -> String {
    format!("{v:.11e}")
}

fn round12(v: f64) -> f64 {
    format_float(v).parse().unwrap_or(v)
}

fn write_csv<W: Write, const N: usize>(
    out: W,
    columns: &[&str; N],
    rows: impl Iterator<Item = [Option<f64>; N]>,
) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(columns).map_err(io)?;
    for cells in rows {
        w.write_record(
            cells
                .iter()
                .map(|c| c.map(format_float).unwrap_or_default()),
        )
        .map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

fn write_json<W: Write, const N: usize>(
    mut out: W,
    kind: &str,
    columns: &[&str; N],
    rows: impl Iterator<Item = [Option<f64>; N]>,
) -> Result<(), CliError> {
    let records: Vec<serde_json::Map<String, serde_json::Value>> = rows
        .map(|cells| {
            columns
                .iter()
                .zip(cells)
                .map(|(name, c)| {
                    let value = c.map(round12).map_or(serde_json::Value::Null, |v| {
                        serde_json::Number::from_f64(v)
                            .map_or(serde_json::Value::Null, serde_json::Value::Number)
                    });
                    (name.to_string(), value)
                })
                .collect()
        })
        .collect();
    let doc = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "table": kind,
        "columns": columns.as_slice(),
        "rows": records,
    });
    serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out).map_err(|e| CliError::Io(e.to_string()))
}

pub fn write_run<W: Write>(
    out: W,
    rows: &[ResultRow],
    format: OutputFormat,
) -> Result<(), CliError> {
    let cells = rows.iter().map(ResultRow::cells);
    match format {
        OutputFormat::Csv => write_csv(out, &RUN_COLUMNS, cells),
        OutputFormat::Json => write_json(out, "run", &RUN_COLUMNS, cells),
    }
}

pub fn write_amplitudes<W: Write>(
    out: W,
    rows: &[AmplitudeRow],
    format: OutputFormat,
) -> Result<(), CliError> {
    let cells = rows.iter().map(AmplitudeRow::cells);
    match format {
        OutputFormat::Csv => write_csv(out, &AMPLITUDE_COLUMNS, cells),
        OutputFormat::Json => write_json(out, "amplitudes", &AMPLITUDE_COLUMNS, cells),
    }
}
