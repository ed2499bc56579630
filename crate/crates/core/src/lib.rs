// Errors carry exact rationals (with big-integer fallback) for precise
// diagnostics; they are rare, so their size is not worth boxing.
#![allow(clippy::result_large_err)]

pub mod cli;
pub mod logic;
pub mod monitor;
pub mod oracle;
pub mod polyhedra;
pub mod rational;
pub mod signals;
