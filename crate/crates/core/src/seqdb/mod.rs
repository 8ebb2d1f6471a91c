//! Sequence databases, queries and Hamming-distance tables.

mod alphabet;
mod fasta;
mod table;

pub use alphabet::Alphabet;
pub use fasta::{load_fasta, read_fasta, read_records, FastaRecord};
pub use table::{hamming_table, HammingMode, HammingTable};

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Residues of every domain placed end to end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceDatabase {
    residues: Vec<u8>,
    domain_offsets: Vec<usize>,
    headers: Vec<String>,
    alphabet: Alphabet,
}

impl SequenceDatabase {
    pub fn from_records(alphabet: Alphabet, records: Vec<FastaRecord>) -> Result<Self> {
        let mut residues = Vec::new();
        let mut domain_offsets = Vec::with_capacity(records.len());
        let mut headers = Vec::with_capacity(records.len());
        for record in records {
            if record.residues.is_empty() {
                return Err(Error::InvalidParams(format!(
                    "domain {:?} has no residues",
                    record.header
                )));
            }
            domain_offsets.push(residues.len());
            headers.push(record.header);
            residues.extend(record.residues);
        }
        Self::from_parts(alphabet, residues, domain_offsets, headers)
    }

    /// Single-domain database from a code vector.
    pub fn from_codes(alphabet: Alphabet, residues: Vec<u8>) -> Result<Self> {
        Self::from_parts(alphabet, residues, vec![0], vec![String::new()])
    }

    /// Parses a plain residue string as one domain.
    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        Self::from_codes(alphabet, alphabet.encode_str(text)?)
    }

    /// Concatenates several plain residue strings, one domain each.
    pub fn parse_domains(alphabet: Alphabet, domains: &[&str]) -> Result<Self> {
        let records = domains
            .iter()
            .enumerate()
            .map(|(i, d)| {
                Ok(FastaRecord {
                    header: format!("domain{i}"),
                    residues: alphabet.encode_str(d)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_records(alphabet, records)
    }

    fn from_parts(
        alphabet: Alphabet,
        residues: Vec<u8>,
        domain_offsets: Vec<usize>,
        headers: Vec<String>,
    ) -> Result<Self> {
        if residues.is_empty() {
            return Err(Error::EmptyDatabase);
        }
        if let Some(&bad) = residues.iter().find(|&&c| c as usize >= alphabet.len()) {
            return Err(Error::InvalidParams(format!(
                "residue code {bad} is outside the {alphabet} alphabet"
            )));
        }
        debug_assert_eq!(domain_offsets.first(), Some(&0));
        debug_assert!(domain_offsets.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(domain_offsets.iter().all(|&o| o < residues.len()));
        Ok(Self {
            residues,
            domain_offsets,
            headers,
            alphabet,
        })
    }

    pub fn residues(&self) -> &[u8] {
        &self.residues
    }

    pub fn domain_offsets(&self) -> &[usize] {
        &self.domain_offsets
    }

    pub fn headers(&self) -> &[String] {
        &self.headers
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    /// Residues `i .. i + m`. Windows may straddle domain boundaries.
    pub fn window(&self, i: usize, m: usize) -> Result<&[u8]> {
        match i.checked_add(m) {
            Some(end) if m > 0 && end <= self.len() => Ok(&self.residues[i..end]),
            _ => Err(Error::OutOfRange {
                start: i,
                len: m,
                total: self.len(),
            }),
        }
    }

    /// Start positions of length-`m` windows that span more than one domain.
    pub fn crossing_windows(&self, m: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        if m < 2 || m > self.len() {
            return out;
        }
        for &boundary in &self.domain_offsets[1..] {
            // window i crosses iff i < boundary < i + m
            let lo = boundary.saturating_sub(m - 1);
            let hi = (boundary - 1).min(self.len() - m);
            out.extend(lo..=hi);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuerySequence {
    residues: Vec<u8>,
    alphabet: Alphabet,
}

impl QuerySequence {
    pub fn new(alphabet: Alphabet, residues: Vec<u8>) -> Result<Self> {
        if residues.is_empty() {
            return Err(Error::EmptyQuery);
        }
        if residues.iter().any(|&c| c as usize >= alphabet.len()) {
            return Err(Error::InvalidParams(format!(
                "query holds codes outside the {alphabet} alphabet"
            )));
        }
        Ok(Self { residues, alphabet })
    }

    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        Self::new(alphabet, alphabet.encode_str(text)?)
    }

    pub fn residues(&self) -> &[u8] {
        &self.residues
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }
}
