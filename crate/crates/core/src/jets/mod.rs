//! Order-4 multivariate Taylor jets.
//!
//! Every derivative the geometry needs comes from these: evaluating an
//! immersion on seeded variable jets yields all partials of the position
//! vector through order four at once, exactly up to rounding.

mod elementary;
mod jet;
mod layout;
mod linsolve;

use thiserror::Error;

pub use elementary::Elementary;
pub use jet::{ArithOp, TaylorJet};
pub use layout::{jet_len, MultiIndex};
pub use linsolve::{jet_linear_solve, jet_linear_solve_many, PIVOT_TOLERANCE};

/// Truncation order of every jet.
pub const ORDER: usize = 4;

/// Largest supported number of chart variables.
pub const MAX_VARS: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("variable index {index} out of range for {nvars} variables")]
    VarOutOfRange { index: usize, nvars: usize },
    #[error("jets over {left} and {right} variables cannot be combined")]
    NvarsMismatch { left: usize, right: usize },
    #[error("multi-index degree {degree} exceeds the jet order {ORDER}")]
    DegreeTooHigh { degree: usize },
    #[error("division by a jet with zero constant term")]
    SingularJet,
    #[error("{function} is undefined at {value}")]
    Domain { function: &'static str, value: f64 },
    #[error("constant-term matrix is singular (column {column})")]
    SingularSystem { column: usize },
    #[error("expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite jet coefficient")]
    NonFinite,
}

/// Seeds one jet per coordinate of `point`.
pub fn seed_point(point: &[f64]) -> Result<Vec<TaylorJet>, JetError> {
    let n = point.len();
    if n == 0 || n > MAX_VARS {
        return Err(JetError::DimensionMismatch { expected: MAX_VARS, found: n });
    }
    point.iter().enumerate().map(|(i, &v)| TaylorJet::variable(i, v, n)).collect()
}
