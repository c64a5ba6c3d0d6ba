use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the library. Numerical routines return these instead of
/// silently producing NaN or Inf.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// Gamma function evaluated at a nonpositive integer.
    #[error("gamma pole at argument {argument}")]
    GammaPole { argument: f64 },

    /// A denominator Pochhammer factor vanished before the series terminated.
    #[error("denominator Pochhammer factor vanishes at term {term}")]
    PochhammerZero { term: usize },

    /// The three-term recursion cannot continue: an off-diagonal coefficient
    /// vanishes before the requested order.
    #[error("polynomial recursion truncates at index {index} (off-diagonal coefficient is zero)")]
    NaturalTruncation { index: usize },

    #[error("factorization failed: {0}")]
    Factorization(String),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("finite-difference oracle did not converge: {0}")]
    OracleConvergence(String),

    /// The partner polynomial is not proportional to the kernel polynomial at
    /// the reported order.
    #[error("kernel proportionality failed at n = {n}: {detail}")]
    Proportionality { n: usize, detail: String },
}
