//! Classical linear-scan reference.
//!
//! Deliberately plain: nested loops, bit-by-bit comparison, no shared code
//! with [`crate::seqdb::hamming_table`]. Everything the simulator reports
//! is checked against this.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seqdb::{HammingMode, HammingTable, QuerySequence, SequenceDatabase};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteResult {
    pub min_distance: u32,
    /// Every position attaining `min_distance`, ascending.
    pub positions: Vec<usize>,
    pub full_table: Option<Vec<u32>>,
}

/// Distance between two residue codes, counted one bit or one residue at a time.
pub fn naive_residue_distance(a: u8, b: u8, bits: u32, mode: HammingMode) -> u32 {
    match mode {
        HammingMode::Residue => u32::from(a != b),
        HammingMode::Bit => {
            let mut differing = 0;
            for bit in 0..bits {
                if (a >> bit) & 1 != (b >> bit) & 1 {
                    differing += 1;
                }
            }
            differing
        }
    }
}

/// Reference Hamming table via a doubly nested loop.
pub fn naive_table(db: &SequenceDatabase, q: &QuerySequence, mode: HammingMode) -> Result<Vec<u32>> {
    let n = db.len();
    let m = q.len();
    if m > n {
        return Err(Error::QueryLongerThanDatabase {
            query: m,
            database: n,
        });
    }
    if db.alphabet() != q.alphabet() {
        return Err(Error::AlphabetMismatch {
            database: db.alphabet().name(),
            query: q.alphabet().name(),
        });
    }
    let bits = db.alphabet().bits_per_residue();
    let residues = db.residues();
    let query = q.residues();
    let mut table = Vec::with_capacity(n - m + 1);
    for i in 0..=(n - m) {
        let mut total = 0;
        for a in 0..m {
            total += naive_residue_distance(residues[i + a], query[a], bits, mode);
        }
        table.push(total);
    }
    Ok(table)
}

pub fn brute_min_distance(
    db: &SequenceDatabase,
    q: &QuerySequence,
    mode: HammingMode,
) -> Result<BruteResult> {
    let table = naive_table(db, q, mode)?;
    let mut result = brute_from_values(&table);
    result.full_table = Some(table);
    Ok(result)
}

/// Minimum and argmin set of an existing table.
pub fn brute_from_table(table: &HammingTable) -> BruteResult {
    brute_from_values(table.values())
}

fn brute_from_values(values: &[u32]) -> BruteResult {
    let mut min_distance = u32::MAX;
    let mut positions = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        if v < min_distance {
            min_distance = v;
            positions.clear();
        }
        if v == min_distance {
            positions.push(i);
        }
    }
    BruteResult {
        min_distance,
        positions,
        full_table: None,
    }
}

/// All positions at exactly `distance`.
pub fn brute_positions_at(table: &HammingTable, distance: u32) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 0..table.n_prime() {
        if table.values()[i] == distance {
            out.push(i);
        }
    }
    out
}
