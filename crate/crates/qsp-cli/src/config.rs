//! Experiment configuration: flag/file merging, per-mode key validation,
//! and the `--figure` presets.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Deserialize;

use qsp_core::{presets, DynamicsClass};

/// Exit statuses: 0 success, 2 config error, 4 oracle budget exceeded,
/// 3 any numerical or assertion failure.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
    Budget(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Numeric(_) => "numeric",
            CliError::Budget(_) => "budget",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numeric(m) | CliError::Budget(m) => m,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Budget(_) => 4,
        }
    }
}

impl From<qsp_core::Error> for CliError {
    fn from(err: qsp_core::Error) -> Self {
        match err {
            qsp_core::Error::OracleBudgetExceeded { .. } => CliError::Budget(err.to_string()),
            _ => CliError::Numeric(err.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Csp,
    Qsp,
    Schrodinger,
    Oracle,
    Ensemble,
    Coin,
    Compare,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Csp => "csp",
            Mode::Qsp => "qsp",
            Mode::Schrodinger => "schrodinger",
            Mode::Oracle => "oracle",
            Mode::Ensemble => "ensemble",
            Mode::Coin => "coin",
            Mode::Compare => "compare",
        }
    }

    /// Every parameter key the mode accepts.
    pub fn allowed_keys(self) -> &'static [&'static str] {
        match self {
            Mode::Csp => &["k11", "k12", "k21", "k22", "c1", "c2", "n_max"],
            Mode::Qsp => &[
                "k11", "k12", "k21", "k22", "alpha", "beta", "delta", "lambda", "hbar", "c1",
                "c2", "n_max",
            ],
            Mode::Schrodinger => {
                &["alpha", "beta", "delta", "hbar", "c1", "c2", "t_max", "grid_points"]
            }
            Mode::Oracle => &["k11", "k12", "k21", "k22", "c1", "c2", "n_max"],
            Mode::Ensemble => &["a_plus", "a_minus"],
            Mode::Coin => &["phi", "grid_points"],
            Mode::Compare => &["alpha", "beta", "delta", "lambda", "hbar", "c1", "c2", "n_max"],
        }
    }
}

impl FromStr for Mode {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csp" => Ok(Mode::Csp),
            "qsp" => Ok(Mode::Qsp),
            "schrodinger" => Ok(Mode::Schrodinger),
            "oracle" => Ok(Mode::Oracle),
            "ensemble" => Ok(Mode::Ensemble),
            "coin" => Ok(Mode::Coin),
            "compare" => Ok(Mode::Compare),
            other => Err(CliError::Config(format!(
                "unknown mode '{other}' (expected csp, qsp, schrodinger, oracle, ensemble, \
                 coin or compare)"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(CliError::Config(format!(
                "unknown output format '{other}' (expected csv or json)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub parameters: BTreeMap<String, f64>,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

/// Values read from a config file before flags are applied on top.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub mode: Option<String>,
    #[serde(default)]
    pub parameters: BTreeMap<String, f64>,
    pub output_format: Option<String>,
    pub output_path: Option<String>,
}

/// Parse a config file: a JSON object mirroring [`ExperimentConfig`], or
/// flat `key=value` lines (keys: mode, format, out, and parameter names).
pub fn parse_config_file(text: &str) -> Result<FileConfig, CliError> {
    if text.trim_start().starts_with('{') {
        return serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("invalid JSON config: {e}")));
    }
    let mut file = FileConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!("config line {} is not key=value: '{line}'", idx + 1))
        })?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "mode" => file.mode = Some(value.to_string()),
            "format" => file.output_format = Some(value.to_string()),
            "out" => file.output_path = Some(value.to_string()),
            _ => {
                let number: f64 = value.parse().map_err(|_| {
                    CliError::Config(format!(
                        "config line {}: value for '{key}' is not a number: '{value}'",
                        idx + 1
                    ))
                })?;
                file.parameters.insert(key.to_string(), number);
            }
        }
    }
    Ok(file)
}

/// Reject keys the mode does not understand.
pub fn validate_keys(mode: Mode, parameters: &BTreeMap<String, f64>) -> Result<(), CliError> {
    let allowed = mode.allowed_keys();
    for key in parameters.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(CliError::Config(format!(
                "unknown key '{key}' for mode '{mode}' (allowed: {})",
                allowed.join(", ")
            )));
        }
    }
    Ok(())
}

pub const FIGURE_IDS: &[&str] =
    &["fig1", "fig3a", "fig3b", "fig3c", "fig3d", "fig4a", "fig4b", "fig7"];

/// Parameter preset behind a figure id.
pub fn figure_preset(id: &str) -> Result<(Mode, BTreeMap<String, f64>), CliError> {
    let mut p = BTreeMap::new();
    let mut put = |key: &str, value: f64| {
        p.insert(key.to_string(), value);
    };
    let mode = match id {
        "fig1" => {
            let h = presets::fig1_hamiltonian();
            put("alpha", presets::FIG1_ALPHA);
            put("beta", presets::FIG1_BETA);
            put("delta", presets::FIG1_DELTA);
            put("hbar", 1.0);
            put("c1", presets::FIG1_C1);
            put("t_max", 3.0 * h.period());
            put("grid_points", 601.0);
            Mode::Schrodinger
        }
        "fig3a" | "fig3b" | "fig3c" | "fig3d" => {
            let class = match id {
                "fig3a" => DynamicsClass::ImmediateStationary,
                "fig3b" => DynamicsClass::MonotoneStationary,
                "fig3c" => DynamicsClass::DampedOscillation,
                _ => DynamicsClass::SustainedOscillation,
            };
            let k = presets::fig3_matrix(class);
            put("k11", k.k11);
            put("k12", k.k12);
            put("k21", k.k21);
            put("k22", k.k22);
            put("c1", 1.0);
            put("c2", 0.0);
            put("n_max", 20.0);
            Mode::Csp
        }
        "fig4a" => {
            put("k11", presets::FIG1_DELTA);
            put("k12", presets::FIG1_BETA);
            put("k21", presets::FIG1_BETA);
            put("k22", -presets::FIG1_DELTA);
            put("c1", presets::FIG1_C1);
            put("n_max", 20.0);
            Mode::Qsp
        }
        "fig4b" => {
            put("alpha", presets::FIG1_ALPHA);
            put("beta", presets::FIG1_BETA);
            put("delta", presets::FIG1_DELTA);
            put("lambda", 1.0);
            put("hbar", 1.0);
            put("c1", presets::FIG1_C1);
            put("n_max", 20.0);
            Mode::Compare
        }
        "fig7" => {
            put("phi", 4.0 * std::f64::consts::PI);
            put("grid_points", 721.0);
            Mode::Coin
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown figure '{other}' (expected one of {})",
                FIGURE_IDS.join(", ")
            )))
        }
    };
    Ok((mode, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_value_files_parse() {
        let file = parse_config_file("mode=coin\n# comment\nphi = 1.5\ngrid_points=5\n").unwrap();
        assert_eq!(file.mode.as_deref(), Some("coin"));
        assert_eq!(file.parameters["phi"], 1.5);
        assert_eq!(file.parameters["grid_points"], 5.0);
    }

    #[test]
    fn json_files_parse() {
        let file = parse_config_file(
            r#"{"mode": "coin", "parameters": {"phi": 1.5}, "output_format": "json"}"#,
        )
        .unwrap();
        assert_eq!(file.mode.as_deref(), Some("coin"));
        assert_eq!(file.output_format.as_deref(), Some("json"));
        assert_eq!(file.parameters["phi"], 1.5);
    }

    #[test]
    fn json_files_reject_unknown_fields() {
        assert!(parse_config_file(r#"{"mode": "coin", "bogus": 1}"#).is_err());
    }

    #[test]
    fn bad_lines_are_rejected() {
        assert!(parse_config_file("just words\n").is_err());
        assert!(parse_config_file("phi=abc\n").is_err());
    }

    #[test]
    fn unknown_keys_are_rejected_per_mode() {
        let mut p = BTreeMap::new();
        p.insert("beta".to_string(), 1.0);
        assert!(validate_keys(Mode::Csp, &p).is_err());
        assert!(validate_keys(Mode::Schrodinger, &p).is_ok());
    }

    #[test]
    fn every_figure_id_resolves() {
        for id in FIGURE_IDS {
            let (mode, params) = figure_preset(id).unwrap();
            assert!(validate_keys(mode, &params).is_ok(), "{id}");
        }
        assert!(figure_preset("fig9").is_err());
    }
}
