use alloc::string::String;
use core::fmt;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operand shapes do not line up (matrix sizes, factor dimensions, qubit counts).
    DimensionMismatch { expected: usize, found: usize },
    /// A structural precondition on dimensions or indices failed.
    Structure(String),
    /// A matrix contained NaN or infinite entries.
    NonFinite,
    /// The matrix is not a valid density matrix (Hermiticity, positivity or trace).
    InvalidState(String),
    /// A state vector is not normalized.
    NotNormalized(f64),
    /// A circuit failed validation.
    InvalidCircuit(String),
    /// The requested operation exceeds the configured dimension cap.
    DimensionCap { requested: usize, cap: usize },
    /// A scalar parameter is outside its admissible range.
    OutOfRange(String),
    /// The channel is too far from an isometry for phase reconstruction.
    NotNearIsometry { probe_opnorm: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::Structure(msg) => write!(f, "{msg}"),
            Error::NonFinite => f.write_str("matrix has non-finite entries"),
            Error::InvalidState(msg) => write!(f, "invalid density matrix: {msg}"),
            Error::NotNormalized(norm) => write!(f, "state vector has norm {norm}, expected 1"),
            Error::InvalidCircuit(msg) => write!(f, "{msg}"),
            Error::DimensionCap { requested, cap } => {
                write!(f, "dimension {requested} exceeds cap {cap}")
            }
            Error::OutOfRange(msg) => write!(f, "{msg}"),
            Error::NotNearIsometry { probe_opnorm } => write!(
                f,
                "channel is not near an isometry: probe output opnorm {probe_opnorm} is not above 0.5"
            ),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
