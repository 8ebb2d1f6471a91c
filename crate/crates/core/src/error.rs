use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown letter {letter:?} for {alphabet} alphabet{}", location(*.line, *.column))]
    UnknownLetter {
        letter: char,
        alphabet: &'static str,
        line: Option<usize>,
        column: Option<usize>,
    },

    #[error("FASTA parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("database contains no residues")]
    EmptyDatabase,

    #[error("query sequence is empty")]
    EmptyQuery,

    #[error("window [{start}, {start}+{len}) is out of range for a database of {total} residues")]
    OutOfRange { start: usize, len: usize, total: usize },

    #[error("alphabet mismatch: database is {database}, query is {query}")]
    AlphabetMismatch {
        database: &'static str,
        query: &'static str,
    },

    #[error("query of length {query} is longer than the database ({database} residues)")]
    QueryLongerThanDatabase { query: usize, database: usize },

    #[error("Hamming table is empty")]
    EmptyTable,

    #[error("amplitude vector has squared norm {0}, expected 1")]
    NotNormalized(f64),

    #[error("amplitude vector length {got} does not match table length {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("closed-form prediction needs at least two windows, got {0}")]
    Domain(usize),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },
}

fn location(line: Option<usize>, column: Option<usize>) -> String {
    match (line, column) {
        (Some(l), Some(c)) => format!(" at line {l}, column {c}"),
        (Some(l), None) => format!(" at line {l}"),
        _ => String::new(),
    }
}
