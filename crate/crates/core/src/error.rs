//! Error type shared by every module in the crate.

use thiserror::Error;

/// All failure modes surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Shape of an input does not match what the operation needs.
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    Dimension {
        context: &'static str,
        expected: String,
        found: String,
    },

    /// A square integer matrix was required to be invertible over the integers.
    #[error("matrix is not unimodular (det = {det})")]
    NotUnimodular { det: String },

    /// A matrix that must be invertible (over Q or C) is singular.
    #[error("singular matrix in {context}")]
    Singular { context: &'static str },

    /// A quadratic form that must be positive definite is not.
    #[error("form is not positive definite (leading minor {index} is {value})")]
    NotPositiveDefinite { index: usize, value: String },

    /// Structural validation of a value failed (symmetry, evenness, consistency).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A point that must lie on the incidence locus does not, within tolerance.
    #[error("point violates the incidence locus: residual {residual:.3e} exceeds tol {tol:.3e}")]
    Locus { residual: f64, tol: f64 },

    /// A truncated series could not reach the requested tolerance.
    #[error(
        "series did not converge: achieved bound {achieved:.3e} at radius {radius}, requested {requested:.3e}"
    )]
    Convergence {
        achieved: f64,
        requested: f64,
        radius: usize,
    },

    /// An equivariance or consistency check that should hold exactly failed.
    #[error("equivariance failure: {0}")]
    Equivariance(String),

    /// Parsing of an external representation failed.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand for a dimension-mismatch error.
    pub fn dim(context: &'static str, expected: impl ToString, found: impl ToString) -> Self {
        Error::Dimension {
            context,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
