//! Minimal FASTA reader.
//!
//! `>` starts a record; every following non-header line is sequence data.
//! Whitespace inside sequence lines is ignored and both LF and CRLF line
//! endings are accepted. Each record becomes one domain of the database.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use super::{Alphabet, SequenceDatabase};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastaRecord {
    pub header: String,
    pub residues: Vec<u8>,
}

pub fn load_fasta(path: impl AsRef<Path>, alphabet: Alphabet) -> Result<SequenceDatabase> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    read_fasta(BufReader::new(file), alphabet)
}

pub fn read_fasta<R: BufRead>(reader: R, alphabet: Alphabet) -> Result<SequenceDatabase> {
    let records = read_records(reader, alphabet)?;
    SequenceDatabase::from_records(alphabet, records)
}

pub fn read_records<R: BufRead>(reader: R, alphabet: Alphabet) -> Result<Vec<FastaRecord>> {
    let mut records: Vec<FastaRecord> = Vec::new();
    let mut header_line = 0;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let line = line.strip_suffix('\r').unwrap_or(&line);

        if let Some(header) = line.strip_prefix('>') {
            close_record(records.last(), header_line)?;
            records.push(FastaRecord {
                header: header.trim().to_string(),
                residues: Vec::new(),
            });
            header_line = line_no;
            continue;
        }

        if line.trim().is_empty() {
            continue;
        }

        let Some(record) = records.last_mut() else {
            return Err(Error::Parse {
                line: line_no,
                message: "sequence data before the first '>' header".into(),
            });
        };

        for (col, c) in line.chars().enumerate() {
            if c.is_whitespace() {
                continue;
            }
            let code = alphabet.encode(c).map_err(|_| Error::UnknownLetter {
                letter: c,
                alphabet: alphabet.name(),
                line: Some(line_no),
                column: Some(col + 1),
            })?;
            record.residues.push(code);
        }
    }

    close_record(records.last(), header_line)?;
    if records.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    Ok(records)
}

fn close_record(record: Option<&FastaRecord>, header_line: usize) -> Result<()> {
    match record {
        Some(r) if r.residues.is_empty() => Err(Error::Parse {
            line: header_line,
            message: format!("record {:?} has no residues", r.header),
        }),
        _ => Ok(()),
    }
}
