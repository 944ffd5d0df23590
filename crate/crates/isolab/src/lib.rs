//! File formats, reports and the command-line front end for `isolab-core`.

pub mod cli;
pub mod format;
pub mod report;
pub mod verifier;

pub use format::{parse_circuit, serialize_circuit, validate_circuit, CircuitParseError};
pub use report::Report;
pub use verifier::{parse_verifier, serialize_verifier};
