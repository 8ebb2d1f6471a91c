//! Classical simulation of amplitude-amplification search over a sequence
//! database, applied to ungapped Hamming-distance alignment.
//!
//! The pipeline: [`seqdb`] encodes residues and builds the table of window
//! distances, [`qsim`] evolves the simulated register, [`bbht`] searches
//! without knowing how many windows match, and [`align`] walks distance
//! levels upward until a match is found. [`oracle`] is the classical
//! linear scan every result is checked against.

pub mod align;
pub mod bbht;
pub mod error;
pub mod oracle;
pub mod qsim;
pub mod rng;
pub mod seqdb;

pub use align::{align_optimal, enumerate_optimal, AlignParams, AlignStatus, AlignmentResult, LevelTrace};
pub use bbht::{bbht_search, Backend, BbhtOutcome, BbhtParams, Hit, Trial};
pub use error::{Error, Result};
pub use oracle::{brute_min_distance, BruteResult};
pub use qsim::{optimal_k, predicted_amplitude, ClassState, GroverPrediction, MarkPredicate, SearchState};
pub use seqdb::{
    hamming_table, load_fasta, Alphabet, HammingMode, HammingTable, QuerySequence, SequenceDatabase,
};
