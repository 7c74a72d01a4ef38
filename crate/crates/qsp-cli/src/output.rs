//! Deterministic CSV/JSON rendering: 15 significant digits, no
//! timestamps, a config-echo header, stable column order.

use std::io::Write;

use serde_json::{json, Map, Number, Value};

use crate::config::{CliError, ExperimentConfig};
use crate::run::{Cell, Table};

/// 15 significant digits, with negative zero normalized away.
pub fn fmt_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.14e}")
}

fn fmt_cell(cell: &Cell) -> String {
    match cell {
        Cell::Int(v) => v.to_string(),
        Cell::UInt(v) => v.to_string(),
        Cell::Float(v) => fmt_float(*v),
    }
}

fn config_echo(config: &ExperimentConfig, table: &Table) -> Vec<(String, String)> {
    let mut echo = vec![("mode".to_string(), config.mode.as_str().to_string())];
    for (key, value) in &table.resolved {
        echo.push((key.clone(), fmt_float(*value)));
    }
    echo.push(("format".to_string(), config.output_format.as_str().to_string()));
    echo
}

pub fn render_csv(config: &ExperimentConfig, table: &Table) -> String {
    let mut out = String::new();
    let echo: Vec<String> =
        config_echo(config, table).iter().map(|(k, v)| format!("{k}={v}")).collect();
    out.push_str(&format!("# config: {}\n", echo.join(" ")));
    if !table.result.is_empty() {
        let result: Vec<String> =
            table.result.iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.push_str(&format!("# result: {}\n", result.join(" ")));
    }
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(fmt_cell).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Round through the 15-digit text form so CSV and JSON carry identical
/// values.
fn json_number(x: f64) -> Value {
    let rounded: f64 = fmt_float(x).parse().expect("formatted float parses");
    Number::from_f64(rounded).map(Value::Number).expect("finite float")
}

fn json_cell(cell: &Cell) -> Value {
    match cell {
        Cell::Int(v) => json!(v),
        Cell::UInt(v) => json!(v),
        Cell::Float(v) => json_number(*v),
    }
}

pub fn render_json(config: &ExperimentConfig, table: &Table) -> String {
    let mut config_object = Map::new();
    config_object.insert("mode".to_string(), json!(config.mode.as_str()));
    config_object.insert("format".to_string(), json!(config.output_format.as_str()));
    let mut parameters = Map::new();
    for (key, value) in &table.resolved {
        parameters.insert(key.clone(), json_number(*value));
    }
    config_object.insert("parameters".to_string(), Value::Object(parameters));

    let mut root = Map::new();
    root.insert("config".to_string(), Value::Object(config_object));
    if !table.result.is_empty() {
        let mut result = Map::new();
        for (key, value) in &table.result {
            result.insert(key.clone(), json!(value));
        }
        root.insert("result".to_string(), Value::Object(result));
    }
    root.insert("columns".to_string(), json!(table.columns));
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| Value::Array(row.iter().map(json_cell).collect()))
        .collect();
    root.insert("rows".to_string(), Value::Array(rows));

    let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("serializable");
    text.push('\n');
    text
}

/// Write the rendered table to the configured destination; warnings go to
/// stderr so data files stay clean.
pub fn emit(config: &ExperimentConfig, table: &Table) -> Result<(), CliError> {
    for warning in &table.warnings {
        eprintln!("warning: {warning}");
    }
    let rendered = match config.output_format {
        crate::config::OutputFormat::Csv => render_csv(config, table),
        crate::config::OutputFormat::Json => render_json(config, table),
    };
    match &config.output_path {
        Some(path) => std::fs::write(path, rendered).map_err(|e| {
            CliError::Config(format!("cannot write output file {}: {e}", path.display()))
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(rendered.as_bytes())
                .map_err(|e| CliError::Config(format!("cannot write to stdout: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_use_fifteen_significant_digits() {
        assert_eq!(fmt_float(1.0), "1.00000000000000e0");
        assert_eq!(fmt_float(0.5), "5.00000000000000e-1");
        assert_eq!(fmt_float(-0.0), "0.00000000000000e0");
        assert_eq!(fmt_float(0.680625), "6.80625000000000e-1");
    }

    #[test]
    fn json_numbers_round_trip_the_text_form() {
        let v = json_number(1.0 / 3.0);
        assert_eq!(v.as_f64().unwrap(), 3.33333333333333e-1);
    }
}
