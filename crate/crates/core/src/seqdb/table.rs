use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use super::{Alphabet, QuerySequence, SequenceDatabase};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HammingMode {
    /// Differing bits between the encoded window and the encoded query.
    #[default]
    Bit,
    /// Differing residues.
    Residue,
}

impl fmt::Display for HammingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HammingMode::Bit => "bit",
            HammingMode::Residue => "residue",
        })
    }
}

impl FromStr for HammingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bit" | "bitlevel" => Ok(HammingMode::Bit),
            "residue" | "residuelevel" => Ok(HammingMode::Residue),
            other => Err(Error::InvalidParams(format!("unknown Hamming mode {other:?}"))),
        }
    }
}

/// Hamming distance of every database window to the query, indexed by
/// window start position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HammingTable {
    values: Vec<u32>,
    mode: HammingMode,
    alphabet: Alphabet,
    query_len: usize,
}

impl HammingTable {
    /// Builds a table from raw distances. Used for synthetic search
    /// instances that have no underlying sequences.
    pub fn from_values(
        values: Vec<u32>,
        mode: HammingMode,
        alphabet: Alphabet,
        query_len: usize,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyTable);
        }
        let table = Self {
            values,
            mode,
            alphabet,
            query_len,
        };
        if let Some(&bad) = table.values.iter().find(|&&v| v > table.max_distance()) {
            return Err(Error::InvalidParams(format!(
                "distance {bad} exceeds the maximum {} for this table",
                table.max_distance()
            )));
        }
        Ok(table)
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn get(&self, i: usize) -> Option<u32> {
        self.values.get(i).copied()
    }

    pub fn mode(&self) -> HammingMode {
        self.mode
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn query_len(&self) -> usize {
        self.query_len
    }

    /// Number of windows, `N - m + 1`.
    pub fn n_prime(&self) -> usize {
        self.values.len()
    }

    /// Largest distance any window can have.
    pub fn max_distance(&self) -> u32 {
        let m = self.query_len as u32;
        match self.mode {
            HammingMode::Bit => m * self.alphabet.bits_per_residue(),
            HammingMode::Residue => m,
        }
    }

    /// Qubits in the sequence register, `bits_per_residue * m`.
    pub fn sequence_qubits(&self) -> usize {
        self.alphabet.bits_per_residue() as usize * self.query_len
    }

    /// Qubits in the position register: smallest `q` with `2^q > N - m`.
    pub fn position_qubits(&self) -> u32 {
        let max_index = (self.n_prime() - 1) as u64;
        u64::BITS - max_index.leading_zeros()
    }

    pub fn positions_at(&self, distance: u32) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v == distance)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn count_at(&self, distance: u32) -> usize {
        self.values.iter().filter(|&&v| v == distance).count()
    }

    pub fn min_distance(&self) -> u32 {
        self.values.iter().copied().min().unwrap_or(0)
    }
}

/// XOR each window against the query and count the set bits
/// (or the differing residues in [`HammingMode::Residue`]).
pub fn hamming_table(
    db: &SequenceDatabase,
    query: &QuerySequence,
    mode: HammingMode,
) -> Result<HammingTable> {
    if db.alphabet() != query.alphabet() {
        return Err(Error::AlphabetMismatch {
            database: db.alphabet().name(),
            query: query.alphabet().name(),
        });
    }
    let m = query.len();
    if m > db.len() {
        return Err(Error::QueryLongerThanDatabase {
            query: m,
            database: db.len(),
        });
    }

    let q = query.residues();
    let values = db
        .residues()
        .windows(m)
        .map(|w| match mode {
            HammingMode::Bit => w.iter().zip(q).map(|(a, b)| (a ^ b).count_ones()).sum(),
            HammingMode::Residue => w.iter().zip(q).filter(|(a, b)| a != b).count() as u32,
        })
        .collect();

    Ok(HammingTable {
        values,
        mode,
        alphabet: db.alphabet(),
        query_len: m,
    })
}
