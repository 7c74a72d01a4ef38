//! Exact signed-path counting on the layered two-state graph.
//!
//! Transition rates are decomposed into parallel unit channels with a
//! common sign. The oracle walks every state sequence of length `n`,
//! weighting each by the product of its channel counts, and tallies how
//! many channel-level paths reach an observation with an even (positive)
//! or odd (negative) number of sign flips. This is deliberately brute
//! force: it is the independent check for matrix-power propagation.

use crate::error::{Error, Result};
use crate::process::{InitialState, SignalVector, TransitionMatrix};

/// One of the two observable states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum State {
    One,
    Two,
}

impl State {
    pub const BOTH: [State; 2] = [State::One, State::Two];

    /// Zero-based index into 2-vectors.
    pub fn index(self) -> usize {
        match self {
            State::One => 0,
            State::Two => 1,
        }
    }

    /// 1-based label used in reports and CSV output.
    pub fn label(self) -> u8 {
        match self {
            State::One => 1,
            State::Two => 2,
        }
    }
}

/// Transition rates split into nonnegative channel counts and signs;
/// entry `[i][j]` describes the channels from state `j` to state `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelMatrix {
    counts: [[u64; 2]; 2],
    signs: [[i8; 2]; 2],
}

impl ChannelMatrix {
    pub fn new(counts: [[u64; 2]; 2], signs: [[i8; 2]; 2]) -> Result<Self> {
        for row in signs {
            for sign in row {
                if sign != 1 && sign != -1 {
                    return Err(Error::InvalidChannelSign { sign });
                }
            }
        }
        Ok(Self { counts, signs })
    }

    /// Decompose signed integer rates; the sign of a zero rate is +1.
    pub fn from_signed(rates: [[i64; 2]; 2]) -> Self {
        let mut counts = [[0u64; 2]; 2];
        let mut signs = [[1i8; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                counts[i][j] = rates[i][j].unsigned_abs();
                signs[i][j] = if rates[i][j] < 0 { -1 } else { 1 };
            }
        }
        Self { counts, signs }
    }

    pub fn count(&self, to: State, from: State) -> u64 {
        self.counts[to.index()][from.index()]
    }

    pub fn sign(&self, to: State, from: State) -> i8 {
        self.signs[to.index()][from.index()]
    }

    /// The signed integer rates `k_ij = s_ij * m_ij`.
    pub fn signed(&self) -> [[i64; 2]; 2] {
        let mut k = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                k[i][j] = i64::from(self.signs[i][j]) * self.counts[i][j] as i64;
            }
        }
        k
    }

    /// The equivalent real transition matrix.
    pub fn transition_matrix(&self) -> TransitionMatrix {
        let k = self.signed();
        TransitionMatrix {
            k11: k[0][0] as f64,
            k12: k[0][1] as f64,
            k21: k[1][0] as f64,
            k22: k[1][1] as f64,
        }
    }

    /// Total channel-level paths to each state after `n` steps, ignoring
    /// signs; `None` on u128 overflow.
    fn unsigned_totals(&self, c: (u64, u64), n: u32) -> Option<(u128, u128)> {
        let mut a = (u128::from(c.0), u128::from(c.1));
        for _ in 0..n {
            let m = &self.counts;
            let a1 = u128::from(m[0][0])
                .checked_mul(a.0)?
                .checked_add(u128::from(m[0][1]).checked_mul(a.1)?)?;
            let a2 = u128::from(m[1][0])
                .checked_mul(a.0)?
                .checked_add(u128::from(m[1][1]).checked_mul(a.1)?)?;
            a = (a1, a2);
        }
        Some(a)
    }
}

/// Counts of positive and negative channel-level paths reaching one
/// observation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathCount {
    pub a_plus: u64,
    pub a_minus: u64,
    pub state: State,
    pub n: u32,
}

impl PathCount {
    /// Net transmitted signal, `a_plus - a_minus`.
    pub fn signal(&self) -> i64 {
        self.a_plus as i64 - self.a_minus as i64
    }

    /// Net recombination events: positive pairings minus negative ones,
    /// `(a_plus)^2 + (a_minus)^2 - 2 a_plus a_minus = signal^2`. Never
    /// negative.
    pub fn born_number(&self) -> u64 {
        let s = self.signal();
        (s * s) as u64
    }

    /// Total path count `a_plus + a_minus`.
    pub fn total(&self) -> u64 {
        self.a_plus + self.a_minus
    }
}

/// Default cap on the weighted path count explored per query.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Exhaustive path enumerator with a work budget.
#[derive(Debug, Clone, Copy)]
pub struct PathOracle {
    budget: u64,
}

impl Default for PathOracle {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET }
    }
}

impl PathOracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_budget(budget: u64) -> Self {
        Self { budget }
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Count positive and negative paths of length `n` from the weighted
    /// start states `c` to `target`.
    ///
    /// Each of the `m_ij` parallel channels of an edge counts as a
    /// distinct path; a path is positive when it crosses an even number
    /// of negative channels. Start state `i` contributes with
    /// multiplicity `c_i`.
    pub fn enumerate_paths(
        &self,
        channels: &ChannelMatrix,
        c: (u64, u64),
        n: u32,
        target: State,
    ) -> Result<PathCount> {
        if c.0 == 0 && c.1 == 0 {
            return Err(Error::ZeroInitialMultiplicities);
        }
        let (t1, t2) = channels
            .unsigned_totals(c, n)
            .ok_or(Error::OracleBudgetExceeded { required: u128::MAX, budget: self.budget })?;
        let required = t1 + t2;
        if required > u128::from(self.budget) {
            return Err(Error::OracleBudgetExceeded { required, budget: self.budget });
        }

        let mut tally = (0u64, 0u64);
        for start in State::BOTH {
            let weight = if start == State::One { c.0 } else { c.1 };
            if weight > 0 {
                walk(channels, start, n, weight, true, target, &mut tally);
            }
        }
        Ok(PathCount { a_plus: tally.0, a_minus: tally.1, state: target, n })
    }

    /// Check the enumeration against matrix-power propagation for every
    /// step up to `n_max` and both states.
    pub fn verify_against_propagation(
        &self,
        channels: &ChannelMatrix,
        c: (u64, u64),
        n_max: u32,
    ) -> Result<VerificationReport> {
        let k = channels.transition_matrix();
        let c0 = InitialState::new(c.0 as f64, c.1 as f64)?;
        let mut signal = SignalVector::from_initial(&c0, 1.0)?;
        let mut checks = 0;
        let mut first_mismatch = None;
        'outer: for n in 0..=n_max {
            for target in State::BOTH {
                let counts = self.enumerate_paths(channels, c, n, target)?;
                let propagated = if target == State::One { signal.a1 } else { signal.a2 };
                checks += 1;
                if counts.signal() as f64 != propagated {
                    first_mismatch = Some(OracleMismatch {
                        state: target,
                        n,
                        a_plus: counts.a_plus,
                        a_minus: counts.a_minus,
                        oracle_signal: counts.signal(),
                        propagated,
                    });
                    break 'outer;
                }
            }
            signal = k.propagate_step(&signal);
        }
        Ok(VerificationReport { checks, first_mismatch })
    }
}

fn walk(
    channels: &ChannelMatrix,
    state: State,
    remaining: u32,
    weight: u64,
    positive: bool,
    target: State,
    tally: &mut (u64, u64),
) {
    if remaining == 0 {
        if state == target {
            if positive {
                tally.0 += weight;
            } else {
                tally.1 += weight;
            }
        }
        return;
    }
    for next in State::BOTH {
        let m = channels.count(next, state);
        if m == 0 {
            continue;
        }
        let flips = channels.sign(next, state) < 0;
        walk(channels, next, remaining - 1, weight * m, positive != flips, target, tally);
    }
}

/// Outcome of [`PathOracle::verify_against_propagation`].
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    /// Number of (step, state) observations compared.
    pub checks: u32,
    /// First disagreement, if any.
    pub first_mismatch: Option<OracleMismatch>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleMismatch {
    pub state: State,
    pub n: u32,
    pub a_plus: u64,
    pub a_minus: u64,
    pub oracle_signal: i64,
    pub propagated: f64,
}
