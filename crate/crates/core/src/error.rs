use thiserror::Error;

/// Errors raised by the quon library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuonError {
    /// A parameter lies outside the range where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A chain of ladder coefficients hit β_k = 0 (fermionic degeneracy).
    #[error("degenerate ladder coefficient: beta_{index} = 0 for q = {q}")]
    Degenerate { index: usize, q: f64 },

    /// A power series was asked to converge outside its disc.
    #[error("series diverges: |s| = {modulus} is not below the radius {radius}")]
    Divergence { modulus: f64, radius: f64 },

    /// A tail-certified series needed more terms than allowed.
    #[error("series did not certify its tail within {max_terms} terms")]
    NoConvergence { max_terms: usize },

    /// Operands that must share parameters or shapes do not.
    #[error("usage error: {0}")]
    Usage(String),

    /// The commutation premise `[h1, X X†] = 0` of an intertwining pair fails.
    #[error("intertwining premise violated: ||[h1, N1]|| = {commutator_norm:e} exceeds {tolerance:e}")]
    PremiseViolation {
        commutator_norm: f64,
        tolerance: f64,
    },

    /// `N2 = X† X` is numerically singular.
    #[error("N2 is not invertible: minimum eigenvalue {min_eigenvalue:e} below threshold {threshold:e}")]
    NotInvertible { min_eigenvalue: f64, threshold: f64 },

    /// A Hankel moment matrix is not positive definite.
    #[error("{matrix} Hankel matrix is not positive definite: leading minor {minor} is {sign}")]
    Conditioning {
        matrix: &'static str,
        minor: usize,
        sign: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, QuonError>;

impl QuonError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        QuonError::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        QuonError::Usage(msg.into())
    }
}
