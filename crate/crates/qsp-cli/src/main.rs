//! `qsp`: run two-state stochastic-process experiments and emit
//! deterministic CSV or JSON tables.

mod config;
mod output;
mod run;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::Parser;

use config::{
    figure_preset, parse_config_file, validate_keys, CliError, ExperimentConfig, Mode,
    OutputFormat,
};

const AFTER_HELP: &str = "\
Modes and their keys (unlisted keys are rejected):
  csp          k11 k12 k21 k22 c1 c2 n_max
               nonnegative rates and initial counts; probability ~ signal
  qsp          either k11 k12 k21 k22 (signed rates, t = n) or
               beta delta [alpha] [lambda] [hbar] (rates = lambda*(H - alpha*I),
               t = n*period/2); plus c1 [c2] n_max; probability ~ signal^2
  schrodinger  beta delta [alpha] [hbar] c1 [c2] [t_max] [grid_points]
               closed-form two-level probabilities on a time grid
  oracle       k11 k12 k21 k22 c1 c2 n_max (all integers)
               exhaustive signed-path counts, checked against propagation
  ensemble     a_plus a_minus
               mean recombination-event matrix over four rotations
  coin         [phi] [grid_points]
               landing probabilities cos^2/sin^2(phi/2) on a grid over [0, phi]
  compare      beta delta [alpha] [lambda] [hbar] c1 [c2] n_max
               discrete squared-signal probabilities vs the continuous solution

In quantum modes (qsp, schrodinger, compare) c2 defaults to sqrt(1 - c1^2).

Figure presets (--figure, exclusive with --mode and parameter flags):
  fig1 fig3a fig3b fig3c fig3d fig4a fig4b fig7

Config file (--config): flat key=value lines (keys: mode, format, out and the
parameter names) or a JSON object {\"mode\", \"parameters\", \"output_format\",
\"output_path\"}. Command-line flags override file values.

Exit codes: 0 success, 2 config error, 3 numerical/assertion failure,
4 oracle budget exceeded.";

#[derive(Debug, Parser)]
#[command(
    name = "qsp",
    about = "Two-state stochastic-process experiments emitting deterministic CSV/JSON",
    after_help = AFTER_HELP,
    allow_negative_numbers = true
)]
struct Cli {
    /// Experiment mode: csp, qsp, schrodinger, oracle, ensemble, coin, compare.
    #[arg(long)]
    mode: Option<String>,
    /// Named parameter preset; see the list below.
    #[arg(long)]
    figure: Option<String>,
    /// Config file with defaults; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long)]
    k11: Option<f64>,
    #[arg(long)]
    k12: Option<f64>,
    #[arg(long)]
    k21: Option<f64>,
    #[arg(long)]
    k22: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    hbar: Option<f64>,
    /// Number of transitions to propagate.
    #[arg(long = "n-max")]
    n_max: Option<f64>,
    /// End of the time grid (schrodinger mode).
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Number of grid points (schrodinger and coin modes).
    #[arg(long = "grid")]
    grid: Option<f64>,
    #[arg(long = "a-plus")]
    a_plus: Option<f64>,
    #[arg(long = "a-minus")]
    a_minus: Option<f64>,
    /// Coin impact angle; in coin mode, the end of the phi grid.
    #[arg(long)]
    phi: Option<f64>,
    /// Output format: csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Output file path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Cli {
    fn parameter_flags(&self) -> Vec<(&'static str, Option<f64>)> {
        vec![
            ("k11", self.k11),
            ("k12", self.k12),
            ("k21", self.k21),
            ("k22", self.k22),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("delta", self.delta),
            ("c1", self.c1),
            ("c2", self.c2),
            ("lambda", self.lambda),
            ("hbar", self.hbar),
            ("n_max", self.n_max),
            ("t_max", self.t_max),
            ("grid_points", self.grid),
            ("a_plus", self.a_plus),
            ("a_minus", self.a_minus),
            ("phi", self.phi),
        ]
    }
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let mut format = None;
    let mut out = None;

    let (mode, parameters) = if let Some(figure) = &cli.figure {
        let flag_set = cli.parameter_flags().iter().any(|(_, v)| v.is_some());
        if cli.mode.is_some() || cli.config.is_some() || flag_set {
            return Err(CliError::Config(
                "--figure is a complete preset; combine it only with --format and --out"
                    .to_string(),
            ));
        }
        figure_preset(figure)?
    } else {
        let mut mode_name = None;
        let mut parameters = BTreeMap::new();
        if let Some(path) = &cli.config {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Config(format!("cannot read config file {}: {e}", path.display()))
            })?;
            let file = parse_config_file(&text)?;
            mode_name = file.mode;
            parameters = file.parameters;
            format = file.output_format;
            out = file.output_path.map(PathBuf::from);
        }
        if let Some(m) = &cli.mode {
            mode_name = Some(m.clone());
        }
        for (key, value) in cli.parameter_flags() {
            if let Some(v) = value {
                parameters.insert(key.to_string(), v);
            }
        }
        let mode_name = mode_name
            .ok_or_else(|| CliError::Config("either --mode or --figure is required".to_string()))?;
        (Mode::from_str(&mode_name)?, parameters)
    };

    if let Some(f) = &cli.format {
        format = Some(f.clone());
    }
    if let Some(o) = &cli.out {
        out = Some(o.clone());
    }
    let output_format = match format {
        Some(f) => OutputFormat::from_str(&f)?,
        None => OutputFormat::Csv,
    };

    validate_keys(mode, &parameters)?;
    Ok(ExperimentConfig { mode, parameters, output_format, output_path: out })
}

fn try_main(cli: &Cli) -> Result<(), CliError> {
    let config = build_config(cli)?;
    let table = run::run(&config)?;
    output::emit(&config, &table)
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => match err.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                print!("{err}");
                std::process::exit(0);
            }
            _ => {
                let text = err.to_string();
                let first = text.lines().next().unwrap_or("invalid arguments");
                eprintln!("error: config: {first}");
                std::process::exit(2);
            }
        },
    };
    if let Err(err) = try_main(&cli) {
        eprintln!("error: {}: {}", err.kind(), err.message());
        std::process::exit(err.exit_code());
    }
}
