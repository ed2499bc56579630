//! Signal first-order logic: syntax trees, the text parser, normalization
//! and the temporal classification used before monitoring.

mod ast;
mod interval;
mod normalize;
mod parse;
mod temporal;

pub use ast::{Formula, Kind, Term};
pub use interval::Interval;
pub use normalize::normalize;
pub use parse::{parse, ParseError};
pub use temporal::{check_temporal, horizons, is_psfo, pastify, Horizons, TemporalError};
