//! Per-mode execution: turn a validated configuration into a data table.

use std::collections::BTreeMap;

use qsp_core::{
    born_probability, classical_probability, mean_over_rotations, transition_from_hamiltonian,
    ChannelMatrix, Hamiltonian, InitialState, PathOracle, SignalVector, State, TransitionMatrix,
};

use crate::config::{CliError, ExperimentConfig, Mode};

/// Largest integer magnitude f64 resolves exactly; beyond it the signal no
/// longer represents an exact path count.
const EXACT_INTEGER_LIMIT: f64 = 9_007_199_254_740_992.0; // 2^53

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    UInt(u64),
    Float(f64),
}

/// A computed table plus the fully resolved parameters used to compute it
/// (defaults filled in), which renderers echo into the output header.
#[derive(Debug)]
pub struct Table {
    pub resolved: BTreeMap<String, f64>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub result: Vec<(String, String)>,
    pub warnings: Vec<String>,
}

impl Table {
    fn new(resolved: BTreeMap<String, f64>, columns: &[&str]) -> Self {
        Self {
            resolved,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            result: Vec::new(),
            warnings: Vec::new(),
        }
    }
}

pub fn run(config: &ExperimentConfig) -> Result<Table, CliError> {
    match config.mode {
        Mode::Csp => run_csp(config),
        Mode::Qsp => run_qsp(config),
        Mode::Schrodinger => run_schrodinger(config),
        Mode::Oracle => run_oracle(config),
        Mode::Ensemble => run_ensemble(config),
        Mode::Coin => run_coin(config),
        Mode::Compare => run_compare(config),
    }
}

struct Params<'a> {
    mode: Mode,
    map: &'a BTreeMap<String, f64>,
}

impl<'a> Params<'a> {
    fn get(&self, key: &str) -> Option<f64> {
        self.map.get(key).copied()
    }

    fn require(&self, key: &str) -> Result<f64, CliError> {
        self.get(key).ok_or_else(|| {
            CliError::Config(format!("missing required key '{key}' for mode '{}'", self.mode))
        })
    }

    fn get_or(&self, key: &str, default: f64) -> f64 {
        self.get(key).unwrap_or(default)
    }
}

fn as_integer(value: f64, key: &str) -> Result<i64, CliError> {
    if !value.is_finite() || value.fract() != 0.0 || value.abs() > EXACT_INTEGER_LIMIT {
        return Err(CliError::Config(format!("'{key}' must be an integer, got {value}")));
    }
    Ok(value as i64)
}

fn as_count(value: f64, key: &str) -> Result<u64, CliError> {
    let int = as_integer(value, key)?;
    u64::try_from(int)
        .map_err(|_| CliError::Config(format!("'{key}' must be nonnegative, got {value}")))
}

fn as_steps(value: f64, key: &str) -> Result<u32, CliError> {
    let int = as_integer(value, key)?;
    u32::try_from(int)
        .map_err(|_| CliError::Config(format!("'{key}' must be in 0..{}, got {value}", u32::MAX)))
}

fn grid_points(params: &Params, default: u32) -> Result<u32, CliError> {
    let n = as_steps(params.get_or("grid_points", f64::from(default)), "grid_points")?;
    if n < 2 {
        return Err(CliError::Config(format!("'grid_points' must be at least 2, got {n}")));
    }
    Ok(n)
}

/// `c2` defaults to `sqrt(1 - c1^2)` in the quantum modes.
fn quantum_initial(params: &Params) -> Result<(InitialState, f64), CliError> {
    let c1 = params.require("c1")?;
    let c2 = match params.get("c2") {
        Some(c2) => c2,
        None => {
            if c1.abs() > 1.0 {
                return Err(CliError::Config(format!(
                    "'c2' can only default to sqrt(1 - c1^2) when |c1| <= 1, got c1 = {c1}"
                )));
            }
            (1.0 - c1 * c1).sqrt()
        }
    };
    if c1 * c1 + c2 * c2 == 0.0 {
        return Err(CliError::Config("c1 and c2 cannot both be zero".to_string()));
    }
    let state = InitialState::new(c1, c2).map_err(|e| CliError::Config(e.to_string()))?;
    Ok((state, c2))
}

fn hamiltonian_from(params: &Params) -> Result<Hamiltonian, CliError> {
    let beta = params.require("beta")?;
    let delta = params.require("delta")?;
    let alpha = params.get_or("alpha", 0.0);
    let hbar = params.get_or("hbar", 1.0);
    Hamiltonian::with_hbar(alpha, beta, delta, hbar).map_err(|e| CliError::Config(e.to_string()))
}

fn transition_from(params: &Params) -> Result<TransitionMatrix, CliError> {
    let k11 = params.require("k11")?;
    let k12 = params.require("k12")?;
    let k21 = params.require("k21")?;
    let k22 = params.require("k22")?;
    TransitionMatrix::new(k11, k12, k21, k22).map_err(|e| CliError::Config(e.to_string()))
}

fn check_finite_signal(v: &SignalVector) -> Result<(), CliError> {
    if v.a1.is_finite() && v.a2.is_finite() {
        Ok(())
    } else {
        Err(CliError::Numeric(format!(
            "signal overflowed the f64 range at n = {}",
            v.n
        )))
    }
}

fn warn_if_count_semantics_lost(table: &mut Table, first_overflow: Option<u32>) {
    if let Some(n) = first_overflow {
        table.warnings.push(format!(
            "|a| exceeds 2^53 from n = {n}; signals no longer resolve exact path counts"
        ));
    }
}

fn run_csp(config: &ExperimentConfig) -> Result<Table, CliError> {
    let params = Params { mode: config.mode, map: &config.parameters };
    let k = transition_from(&params)?;
    if k.k11 < 0.0 || k.k12 < 0.0 || k.k21 < 0.0 || k.k22 < 0.0 {
        return Err(CliError::Config("mode 'csp' requires nonnegative rates".to_string()));
    }
    let c1 = params.require("c1")?;
    let c2 = params.require("c2")?;
    if c1 < 0.0 || c2 < 0.0 || c1 + c2 == 0.0 {
        return Err(CliError::Config(
            "mode 'csp' requires c1 >= 0, c2 >= 0 with c1 + c2 > 0".to_string(),
        ));
    }
    let n_max = as_steps(params.require("n_max")?, "n_max")?;

    let mut resolved = config.parameters.clone();
    resolved.insert("n_max".to_string(), f64::from(n_max));
    let mut table = Table::new(resolved, &["n", "t", "a1", "a2", "p1", "p2"]);

    let c = InitialState::new(c1, c2).map_err(|e| CliError::Config(e.to_string()))?;
    let mut v = SignalVector::from_initial(&c, 1.0).map_err(|e| CliError::Config(e.to_string()))?;
    let mut first_overflow = None;
    for n in 0..=n_max {
        check_finite_signal(&v)?;
        if first_overflow.is_none() && v.a1.abs().max(v.a2.abs()) > EXACT_INTEGER_LIMIT {
            first_overflow = Some(n);
        }
        let (p1, p2) = classical_probability(&v)?;
        table.rows.push(vec![
            Cell::Int(i64::from(n)),
            Cell::Float(v.time()),
            Cell::Float(v.a1),
            Cell::Float(v.a2),
            Cell::Float(p1),
            Cell::Float(p2),
        ]);
        v = k.propagate_step(&v);
    }
    warn_if_count_semantics_lost(&mut table, first_overflow);
    Ok(table)
}

fn run_qsp(config: &ExperimentConfig) -> Result<Table, CliError> {
    let params = Params { mode: config.mode, map: &config.parameters };
    let matrix_style = ["k11", "k12", "k21", "k22"].iter().any(|k| params.get(k).is_some());
    let hamiltonian_style =
        ["alpha", "beta", "delta", "lambda", "hbar"].iter().any(|k| params.get(k).is_some());
    if matrix_style && hamiltonian_style {
        return Err(CliError::Config(
            "mode 'qsp' accepts either k11..k22 or beta/delta (+alpha, lambda, hbar), \
             not both"
            .to_string(),
        ));
    }
    if !matrix_style && !hamiltonian_style {
        return Err(CliError::Config(
            "mode 'qsp' requires either k11..k22 or beta and delta".to_string(),
        ));
    }

    let mut resolved = config.parameters.clone();
    let (k, tau) = if matrix_style {
        (transition_from(&params)?, 1.0)
    } else {
        let h = hamiltonian_from(&params)?;
        let lambda = params.get_or("lambda", 1.0);
        if lambda == 0.0 {
            return Err(CliError::Config("'lambda' must be nonzero".to_string()));
        }
        resolved.insert("alpha".to_string(), h.alpha());
        resolved.insert("hbar".to_string(), h.hbar());
        resolved.insert("lambda".to_string(), lambda);
        let k = transition_from_hamiltonian(&h, lambda)
            .map_err(|e| CliError::Config(e.to_string()))?;
        (k, 0.5 * h.period())
    };

    let (c, c2) = quantum_initial(&params)?;
    resolved.insert("c2".to_string(), c2);
    let n_max = as_steps(params.require("n_max")?, "n_max")?;

    let mut table = Table::new(resolved, &["n", "t", "a1", "a2", "p1", "p2"]);
    let mut v = SignalVector::from_initial(&c, tau).map_err(|e| CliError::Config(e.to_string()))?;
    let mut first_overflow = None;
    for n in 0..=n_max {
        check_finite_signal(&v)?;
        if first_overflow.is_none() && v.a1.abs().max(v.a2.abs()) > EXACT_INTEGER_LIMIT {
            first_overflow = Some(n);
        }
        let (p1, p2) = born_probability(&v)?;
        table.rows.push(vec![
            Cell::Int(i64::from(n)),
            Cell::Float(v.time()),
            Cell::Float(v.a1),
            Cell::Float(v.a2),
            Cell::Float(p1),
            Cell::Float(p2),
        ]);
        v = k.propagate_step(&v);
    }
    warn_if_count_semantics_lost(&mut table, first_overflow);
    Ok(table)
}

fn run_schrodinger(config: &ExperimentConfig) -> Result<Table, CliError> {
    let params = Params { mode: config.mode, map: &config.parameters };
    let h = hamiltonian_from(&params)?;
    let (c, c2) = quantum_initial(&params)?;
    let period = h.period();
    let t_max = params.get_or("t_max", 3.0 * period);
    if !t_max.is_finite() || t_max <= 0.0 {
        return Err(CliError::Config(format!("'t_max' must be positive, got {t_max}")));
    }
    let points = grid_points(&params, 601)?;

    let mut resolved = config.parameters.clone();
    resolved.insert("alpha".to_string(), h.alpha());
    resolved.insert("hbar".to_string(), h.hbar());
    resolved.insert("c2".to_string(), c2);
    resolved.insert("t_max".to_string(), t_max);
    resolved.insert("grid_points".to_string(), f64::from(points));

    let mut table = Table::new(resolved, &["t", "theta", "t_over_period", "p1", "p2"]);
    for i in 0..points {
        let t = t_max * f64::from(i) / f64::from(points - 1);
        let (p1, p2) = h.probabilities(&c, t);
        table.rows.push(vec![
            Cell::Float(t),
            Cell::Float(h.theta(t)),
            Cell::Float(t / period),
            Cell::Float(p1),
            Cell::Float(p2),
        ]);
    }
    Ok(table)
}

fn run_oracle(config: &ExperimentConfig) -> Result<Table, CliError> {
    let params = Params { mode: config.mode, map: &config.parameters };
    let mut rates = [[0i64; 2]; 2];
    for (key, slot) in
        [("k11", (0, 0)), ("k12", (0, 1)), ("k21", (1, 0)), ("k22", (1, 1))]
    {
        rates[slot.0][slot.1] = as_integer(params.require(key)?, key)?;
    }
    let c = (
        as_count(params.require("c1")?, "c1")?,
        as_count(params.require("c2")?, "c2")?,
    );
    if c.0 == 0 && c.1 == 0 {
        return Err(CliError::Config("c1 and c2 cannot both be zero".to_string()));
    }
    let n_max = as_steps(params.require("n_max")?, "n_max")?;

    let channels = ChannelMatrix::from_signed(rates);
    let oracle = PathOracle::new();
    let report = oracle.verify_against_propagation(&channels, c, n_max)?;
    if let Some(m) = report.first_mismatch {
        return Err(CliError::Numeric(format!(
            "path enumeration disagrees with propagation at n = {}, state {}: \
             oracle {} vs propagated {}",
            m.n,
            m.state.label(),
            m.oracle_signal,
            m.propagated
        )));
    }

    let mut table = Table::new(
        config.parameters.clone(),
        &["n", "state", "a_plus", "a_minus", "signal", "born_number"],
    );
    for n in 0..=n_max {
        for state in State::BOTH {
            let counts = oracle.enumerate_paths(&channels, c, n, state)?;
            table.rows.push(vec![
                Cell::Int(i64::from(n)),
                Cell::Int(i64::from(state.label())),
                Cell::UInt(counts.a_plus),
                Cell::UInt(counts.a_minus),
                Cell::Int(counts.signal()),
                Cell::UInt(counts.born_number()),
            ]);
        }
    }
    table.result.push(("verified_checks".to_string(), report.checks.to_string()));
    table.result.push(("verified".to_string(), "true".to_string()));
    Ok(table)
}

/// Grid cap: the mean event matrix has (a_plus + a_minus)^2 cells.
const ENSEMBLE_SIZE_LIMIT: u64 = 4096;

fn run_ensemble(config: &ExperimentConfig) -> Result<Table, CliError> {
    let params = Params { mode: config.mode, map: &config.parameters };
    let a_plus = as_count(params.require("a_plus")?, "a_plus")?;
    let a_minus = as_count(params.require("a_minus")?, "a_minus")?;
    if a_plus + a_minus == 0 {
        return Err(CliError::Config("a_plus and a_minus cannot both be zero".to_string()));
    }
    if a_plus + a_minus > ENSEMBLE_SIZE_LIMIT {
        return Err(CliError::Config(format!(
            "a_plus + a_minus must be at most {ENSEMBLE_SIZE_LIMIT}, got {}",
            a_plus + a_minus
        )));
    }

    let ensemble = mean_over_rotations(a_plus, a_minus)?;
    let size = ensemble.size();
    let columns: Vec<String> = (1..=size).map(|j| format!("c{j}")).collect();
    let mut table = Table {
        resolved: config.parameters.clone(),
        columns,
        rows: Vec::with_capacity(size),
        result: vec![
            ("size".to_string(), size.to_string()),
            ("born_count".to_string(), ensemble.born_count().to_string()),
            ("block_side".to_string(), ensemble.block_side().to_string()),
        ],
        warnings: Vec::new(),
    };
    for i in 0..size {
        table
            .rows
            .push((0..size).map(|j| Cell::UInt(u64::from(ensemble.mean_entry(i, j)))).collect());
    }
    Ok(table)
}

fn run_coin(config: &ExperimentConfig) -> Result<Table, CliError> {
    let params = Params { mode: config.mode, map: &config.parameters };
    let phi_end = params.get_or("phi", 4.0 * std::f64::consts::PI);
    if !phi_end.is_finite() {
        return Err(CliError::Config(format!("'phi' must be finite, got {phi_end}")));
    }
    let points = grid_points(&params, 721)?;

    let mut resolved = config.parameters.clone();
    resolved.insert("phi".to_string(), phi_end);
    resolved.insert("grid_points".to_string(), f64::from(points));

    let mut table = Table::new(resolved, &["phi", "p_heads", "p_tails"]);
    for i in 0..points {
        let phi = phi_end * f64::from(i) / f64::from(points - 1);
        let (heads, tails) = qsp_core::coin_probabilities(phi);
        table.rows.push(vec![Cell::Float(phi), Cell::Float(heads), Cell::Float(tails)]);
    }
    Ok(table)
}

fn run_compare(config: &ExperimentConfig) -> Result<Table, CliError> {
    let params = Params { mode: config.mode, map: &config.parameters };
    let h = hamiltonian_from(&params)?;
    let lambda = params.get_or("lambda", 1.0);
    if lambda == 0.0 {
        return Err(CliError::Config("'lambda' must be nonzero".to_string()));
    }
    let (c, c2) = quantum_initial(&params)?;
    let n_max = as_steps(params.require("n_max")?, "n_max")?;

    let mut resolved = config.parameters.clone();
    resolved.insert("alpha".to_string(), h.alpha());
    resolved.insert("hbar".to_string(), h.hbar());
    resolved.insert("lambda".to_string(), lambda);
    resolved.insert("c2".to_string(), c2);

    let k = transition_from_hamiltonian(&h, lambda).map_err(|e| CliError::Config(e.to_string()))?;
    let tau = 0.5 * h.period();

    let mut table =
        Table::new(resolved, &["n", "t", "p1_qsp", "p2_qsp", "p1_qm", "p2_qm"]);
    let mut v = SignalVector::from_initial(&c, tau).map_err(|e| CliError::Config(e.to_string()))?;
    for n in 0..=n_max {
        check_finite_signal(&v)?;
        let (p1_qsp, p2_qsp) = born_probability(&v)?;
        let (p1_qm, p2_qm) = h.probabilities(&c, v.time());
        table.rows.push(vec![
            Cell::Int(i64::from(n)),
            Cell::Float(v.time()),
            Cell::Float(p1_qsp),
            Cell::Float(p2_qsp),
            Cell::Float(p1_qm),
            Cell::Float(p2_qm),
        ]);
        v = k.propagate_step(&v);
    }
    Ok(table)
}
