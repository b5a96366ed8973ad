//! Error type shared across the crate.

use std::fmt;

/// Errors produced by the audit, sampling, and operator routines.
///
/// All closed-form probability operations are total and never error; only
/// grid-driven scans, Monte Carlo estimation, and matrix construction have
/// failure modes.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A scan or audit was asked to run over an empty grid.
    EmptyGrid,
    /// A Monte Carlo estimate was requested with zero trials.
    ZeroTrials,
    /// Confidence level outside the open interval (0, 1).
    InvalidConfidence(f64),
    /// A hidden-variable value outside [0, 1).
    HiddenVariableOutOfRange(f64),
    /// A matrix expected to be Hermitian was not, within tolerance.
    NotHermitian { max_asymmetry: f64 },
    /// Commutator operands of unequal dimension.
    DimensionMismatch { left: usize, right: usize },
    /// Operator construction below the minimum dimension.
    DimensionTooSmall { dim: usize, min: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyGrid => f.write_str("empty scan grid"),
            Self::ZeroTrials => f.write_str("zero trials"),
            Self::InvalidConfidence(c) => {
                write!(f, "confidence {c} outside (0, 1)")
            }
            Self::HiddenVariableOutOfRange(p) => {
                write!(f, "hidden-variable value {p} outside [0, 1)")
            }
            Self::NotHermitian { max_asymmetry } => {
                write!(f, "matrix not Hermitian (max asymmetry {max_asymmetry:.3e})")
            }
            Self::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            Self::DimensionTooSmall { dim, min } => {
                write!(f, "dimension {dim} below minimum {min}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
