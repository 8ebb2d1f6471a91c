//! Optimal Hamming alignment by level-wise amplitude amplification.
//!
//! Level `n` asks "is there a window at distance `n`?" with up to `r`
//! independent unknown-count searches. The first level that answers yes
//! gives an optimal alignment with high probability; every reported hit is
//! verified against the table, so a reported distance is never wrong, only
//! possibly suboptimal.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::bbht::{bbht_search, BbhtParams};
use crate::error::{Error, Result};
use crate::qsim::MarkPredicate;
use crate::rng::derive_seed;
use crate::seqdb::{HammingMode, HammingTable};

pub const DEFAULT_REPEATS: u32 = 3;

/// Seed-stream tag separating enumeration runs from level searches.
const ENUMERATE_TAG: u64 = 0x656e_756d;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignParams {
    /// Full unknown-count runs per level before moving on.
    pub r: u32,
    pub n_max: u32,
    /// Lambda, timeout and backend; the seed field is overwritten per run.
    pub bbht: BbhtParams,
    pub master_seed: u64,
    /// Windows never reported (for example, domain-crossing windows).
    pub excluded: BTreeSet<usize>,
}

impl AlignParams {
    pub fn for_table(table: &HammingTable) -> Self {
        Self {
            r: DEFAULT_REPEATS,
            n_max: default_n_max(table),
            bbht: BbhtParams::default(),
            master_seed: 0,
            excluded: BTreeSet::new(),
        }
    }

    pub fn validate(&self, table: &HammingTable) -> Result<()> {
        if self.r == 0 {
            return Err(Error::InvalidParams("repeat count r must be at least 1".into()));
        }
        if self.n_max > table.max_distance() {
            return Err(Error::InvalidParams(format!(
                "n_max {} exceeds the largest possible distance {}",
                self.n_max,
                table.max_distance()
            )));
        }
        self.bbht.validate()
    }

    fn run_params(&self, indices: &[u64]) -> BbhtParams {
        BbhtParams {
            seed: derive_seed(self.master_seed, indices),
            ..self.bbht
        }
    }
}

/// Roughly a third of the residues mismatching.
pub fn default_n_max(table: &HammingTable) -> u32 {
    let third = table.query_len().div_ceil(3) as u32;
    match table.mode() {
        HammingMode::Bit => table.alphabet().bits_per_residue() * third,
        HammingMode::Residue => third,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlignStatus {
    Found,
    ExhaustedNMax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelTrace {
    pub n: u32,
    pub repeats_used: u32,
    pub oracle_calls: u64,
    pub found: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignmentResult {
    pub status: AlignStatus,
    pub position: Option<usize>,
    pub distance: Option<u32>,
    pub oracle_calls_total: u64,
    pub per_level_trace: Vec<LevelTrace>,
}

pub fn align_optimal(table: &HammingTable, params: &AlignParams) -> Result<AlignmentResult> {
    params.validate(table)?;
    let mut oracle_calls_total = 0;
    let mut per_level_trace = Vec::new();

    for n in 0..=params.n_max {
        let mark = MarkPredicate::with_excluded(n, params.excluded.clone());
        let mut level = LevelTrace {
            n,
            repeats_used: 0,
            oracle_calls: 0,
            found: false,
        };
        for repeat in 0..params.r {
            let outcome = bbht_search(table, &mark, &params.run_params(&[n as u64, repeat as u64]))?;
            level.repeats_used += 1;
            level.oracle_calls += outcome.oracle_calls;
            if let Some(hit) = outcome.found {
                if table.get(hit.position) != Some(n) {
                    // unreachable while bbht verifies its own hits
                    continue;
                }
                level.found = true;
                oracle_calls_total += level.oracle_calls;
                per_level_trace.push(level);
                return Ok(AlignmentResult {
                    status: AlignStatus::Found,
                    position: Some(hit.position),
                    distance: Some(n),
                    oracle_calls_total,
                    per_level_trace,
                });
            }
        }
        oracle_calls_total += level.oracle_calls;
        per_level_trace.push(level);
    }

    Ok(AlignmentResult {
        status: AlignStatus::ExhaustedNMax,
        position: None,
        distance: None,
        oracle_calls_total,
        per_level_trace,
    })
}

/// Collects further windows at distance `k`: each hit is excluded from the
/// next search, and collection stops after `r` consecutive misses.
/// `known` seeds both the exclusion set and the result.
pub fn enumerate_optimal(
    table: &HammingTable,
    k: u32,
    params: &AlignParams,
    known: &BTreeSet<usize>,
) -> Result<BTreeSet<usize>> {
    params.validate(table)?;
    if k > table.max_distance() {
        return Err(Error::InvalidParams(format!(
            "distance {k} exceeds the largest possible distance {}",
            table.max_distance()
        )));
    }

    let mut found = known.clone();
    let mut mark = MarkPredicate::with_excluded(k, &params.excluded | known);
    let mut misses = 0;
    let mut attempt = 0u64;
    while misses < params.r {
        let outcome = bbht_search(table, &mark, &params.run_params(&[ENUMERATE_TAG, k as u64, attempt]))?;
        attempt += 1;
        match outcome.found {
            Some(hit) if table.get(hit.position) == Some(k) => {
                found.insert(hit.position);
                mark.excluded.insert(hit.position);
                misses = 0;
            }
            _ => misses += 1,
        }
    }
    Ok(found)
}
