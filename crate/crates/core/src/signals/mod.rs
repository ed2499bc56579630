//! Piecewise-linear signals: CSV ingestion, interpolation pieces, whole
//! traces for offline evaluation and the sliding store used online.

mod ingest;
mod piece;
mod store;
mod synthetic;
mod trace;

pub use ingest::{read_samples, SampleReader, TimeCheck};
pub use piece::{encode_segment, SamplePoint, SignalPiece};
pub use store::SignalStore;
pub use synthetic::{samples_to_csv, synthetic_samples};
pub use trace::Trace;

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SignalError {
    #[error("csv: {0}")]
    Csv(String),
    #[error("header: {0}")]
    Header(String),
    #[error("line {line}: {msg}")]
    Row { line: u64, msg: String },
    #[error("line {line}: expected time {expected} for the declared period, found {found}")]
    Period { line: u64, expected: Rational, found: Rational },
    #[error("time {found} does not increase past {previous}")]
    NonIncreasing { previous: Rational, found: Rational },
    #[error("no samples for signal `{0}`")]
    MissingSignal(String),
    #[error("trace has no samples")]
    Empty,
}
