use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("lattice map is not injective (rank {rank} < {cols} columns)")]
    NotInjective { rank: usize, cols: usize },

    #[error("cokernel has torsion (invariant factors {factors:?})")]
    TorsionCokernel { factors: Vec<String> },

    #[error("stable locus is empty")]
    EmptyStableLocus,

    #[error("free action violated: {0}")]
    FreeActionViolated(String),

    #[error("support is not unstable (m >= 0); the adapted one-parameter subgroup is not unique")]
    NotUnstable,

    #[error("zero dimension vector")]
    ZeroDimensionVector,

    #[error("input too large for exhaustive search: {0}")]
    TooLarge(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
