//! Residue alphabets and their fixed-width bit encodings.
//!
//! Amino acids use 5 bits per residue with the 20 standard one-letter codes
//! assigned in alphabetical order. Nucleotides use 2 bits (`A,C,G,T`).
//! Codes outside `0..letters.len()` are never produced and never accepted.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const PROTEIN_LETTERS: &[u8; 20] = b"ACDEFGHIKLMNPQRSTVWY";
const DNA_LETTERS: &[u8; 4] = b"ACGT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Alphabet {
    Protein,
    Dna,
}

impl Alphabet {
    pub fn letters(self) -> &'static [u8] {
        match self {
            Alphabet::Protein => PROTEIN_LETTERS,
            Alphabet::Dna => DNA_LETTERS,
        }
    }

    pub fn len(self) -> usize {
        self.letters().len()
    }

    pub fn is_empty(self) -> bool {
        false
    }

    /// Width of one residue in the first register.
    pub fn bits_per_residue(self) -> u32 {
        match self {
            Alphabet::Protein => 5,
            Alphabet::Dna => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Alphabet::Protein => "protein",
            Alphabet::Dna => "dna",
        }
    }

    /// Maps a letter (case-insensitive) to its residue code.
    pub fn encode(self, letter: char) -> Result<u8> {
        let upper = letter.to_ascii_uppercase();
        if upper.is_ascii() {
            if let Some(code) = self.letters().iter().position(|&b| b == upper as u8) {
                return Ok(code as u8);
            }
        }
        Err(Error::UnknownLetter {
            letter,
            alphabet: self.name(),
            line: None,
            column: None,
        })
    }

    /// Inverse of [`Alphabet::encode`]; `None` for codes outside the alphabet.
    pub fn decode(self, code: u8) -> Option<char> {
        self.letters().get(code as usize).map(|&b| b as char)
    }

    pub fn encode_str(self, text: &str) -> Result<Vec<u8>> {
        text.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| self.encode(c))
            .collect()
    }

    pub fn decode_codes(self, codes: &[u8]) -> String {
        codes
            .iter()
            .map(|&c| self.decode(c).unwrap_or('?'))
            .collect()
    }

    /// Big-endian bit string of one code, `bits_per_residue` characters wide.
    pub fn bit_string(self, code: u8) -> String {
        let width = self.bits_per_residue() as usize;
        format!("{code:0width$b}")
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Alphabet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "protein" | "aa" | "amino" => Ok(Alphabet::Protein),
            "dna" | "nt" | "nucleotide" => Ok(Alphabet::Dna),
            other => Err(Error::InvalidParams(format!("unknown alphabet {other:?}"))),
        }
    }
}
