//! Amplitude amplification with an unknown number of solutions.
//!
//! Each trial picks an iteration count uniformly from `0..ceil(M)`,
//! evolves a fresh uniform state, measures, and checks the outcome
//! classically. On failure `M` grows by `lambda` up to `sqrt(n')`. A run
//! gives up once its oracle budget `ceil(timeout_factor * sqrt(n'))` is
//! spent; the last trial is shortened so the budget is never overrun.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{ClassState, MarkPredicate, SearchState};
use crate::rng::rng_from_seed;
use crate::seqdb::HammingTable;

pub const DEFAULT_LAMBDA: f64 = 6.0 / 5.0;
pub const DEFAULT_TIMEOUT_FACTOR: f64 = 4.0;

/// Which simulator evolves the register.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// One amplitude per window.
    #[default]
    Dense,
    /// One amplitude per `(distance, excluded)` class.
    Classes,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BbhtParams {
    pub lambda: f64,
    pub timeout_factor: f64,
    pub seed: u64,
    pub backend: Backend,
}

impl Default for BbhtParams {
    fn default() -> Self {
        Self {
            lambda: DEFAULT_LAMBDA,
            timeout_factor: DEFAULT_TIMEOUT_FACTOR,
            seed: 0,
            backend: Backend::Dense,
        }
    }
}

impl BbhtParams {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 1.0 && self.lambda < 4.0 / 3.0) {
            return Err(Error::InvalidParams(format!(
                "lambda must lie in (1, 4/3), got {}",
                self.lambda
            )));
        }
        if !(self.timeout_factor > 0.0 && self.timeout_factor.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "timeout factor must be positive, got {}",
                self.timeout_factor
            )));
        }
        Ok(())
    }

    /// Oracle calls one run may spend.
    pub fn budget(&self, n_prime: usize) -> u64 {
        (self.timeout_factor * (n_prime as f64).sqrt()).ceil() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trial {
    pub iterations: u64,
    pub measured: usize,
    pub success: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hit {
    pub position: usize,
    pub distance: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BbhtOutcome {
    pub found: Option<Hit>,
    pub oracle_calls: u64,
    pub trials: Vec<Trial>,
}

enum Register<'t> {
    Dense(&'t HammingTable),
    Classes(ClassState<'t>),
}

impl Register<'_> {
    fn run<R: Rng>(&mut self, mark: &MarkPredicate, iterations: u64, rng: &mut R) -> Result<usize> {
        match self {
            Register::Dense(table) => {
                let mut state = SearchState::init_uniform(table)?;
                state.evolve(mark, iterations);
                Ok(state.measure(rng))
            }
            Register::Classes(state) => {
                state.reset();
                state.evolve(iterations);
                Ok(state.measure(rng))
            }
        }
    }
}

pub fn bbht_search(
    table: &HammingTable,
    mark: &MarkPredicate,
    params: &BbhtParams,
) -> Result<BbhtOutcome> {
    params.validate()?;
    let n_prime = table.n_prime();
    if n_prime == 0 {
        return Err(Error::EmptyTable);
    }
    let budget = params.budget(n_prime);
    let cap = (n_prime as f64).sqrt();
    let mut rng = rng_from_seed(params.seed);
    let mut register = match params.backend {
        Backend::Dense => Register::Dense(table),
        Backend::Classes => Register::Classes(ClassState::init_uniform(table, mark)?),
    };

    let mut bound = 1.0_f64;
    let mut oracle_calls = 0u64;
    let mut trials = Vec::new();
    loop {
        let range = bound.ceil() as u64;
        let drawn = rng.gen_range(0..range);
        let iterations = drawn.min(budget.saturating_sub(oracle_calls));
        let measured = register.run(mark, iterations, &mut rng)?;
        oracle_calls += iterations;

        // classical check of the measured window
        let success = mark.is_marked(table, measured);
        trials.push(Trial {
            iterations,
            measured,
            success,
        });
        if success {
            return Ok(BbhtOutcome {
                found: Some(Hit {
                    position: measured,
                    distance: mark.target_distance,
                }),
                oracle_calls,
                trials,
            });
        }

        let next = (params.lambda * bound).min(cap);
        // with a single window there is nothing to amplify
        let stuck = range == 1 && next.ceil() as u64 == 1;
        if oracle_calls >= budget || stuck {
            return Ok(BbhtOutcome {
                found: None,
                oracle_calls,
                trials,
            });
        }
        bound = next;
    }
}
