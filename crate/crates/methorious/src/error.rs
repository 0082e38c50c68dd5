//! Error type shared by all modules of the crate.

use core::fmt;

/// Errors raised by the symbolic operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Inversion or division by the zero scalar.
    DivisionByZero,
    /// Interval refinement could not separate a denominator from zero
    /// within the iteration cap.
    PrecisionExhausted,
    /// The differential operator has no rational-splitting characteristic
    /// polynomial and no fundamental system was supplied.
    UnsupportedOperator,
    /// The boundary problem is singular where a regular one is required.
    SingularProblem,
    /// A claimed operator factorization does not hold.
    FactorMismatch,
    /// The boundary condition has zero normal form.
    ZeroCondition,
    /// All umbral coefficients vanish up to the search bound.
    UmbralSearchExceeded,
    /// Evaluation points for a block Vandermonde matrix coincide.
    DuplicatePoints,
    /// Mismatched lengths of conditions and boundary values.
    DimensionMismatch,
    /// A methorious function cannot be divided by the given problem.
    NotLeftDivisible,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero scalar"),
            Error::PrecisionExhausted => {
                write!(f, "interval refinement exhausted without separating from zero")
            }
            Error::UnsupportedOperator => write!(
                f,
                "operator has no rational-splitting characteristic polynomial and no \
                 fundamental system was supplied"
            ),
            Error::SingularProblem => write!(f, "boundary problem is singular"),
            Error::FactorMismatch => write!(f, "operator factorization does not hold"),
            Error::ZeroCondition => write!(f, "boundary condition has zero normal form"),
            Error::UmbralSearchExceeded => {
                write!(f, "umbral coefficient search exceeded its bound")
            }
            Error::DuplicatePoints => write!(f, "evaluation points must be pairwise distinct"),
            Error::DimensionMismatch => {
                write!(f, "number of boundary values does not match number of conditions")
            }
            Error::NotLeftDivisible => {
                write!(f, "no left decomposition of the ideal element by the given problem")
            }
        }
    }
}

impl core::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
