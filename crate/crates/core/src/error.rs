use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree {0} supplied more than once")]
    DuplicateDegree(i64),

    #[error("non-finite coefficient at degree {0}")]
    NonFinite(i64),

    #[error("argument |z| = {abs} outside evaluation domain (max {max})")]
    Domain { abs: f64, max: f64 },

    #[error("cannot evaluate negative-degree terms at z = 0")]
    ZeroArgument,

    #[error("scaling by zero is undefined for negative-degree terms")]
    ZeroScale,

    #[error("cyclic order must be at least 2, got {0}")]
    Order(usize),

    #[error("truncation order {trunc} must be at least the cyclic order {n}")]
    Truncation { trunc: usize, n: usize },

    #[error("closed-form evaluation is singular at alpha = 0")]
    AlphaZero,

    #[error("expected {expected} components, got {got}")]
    ComponentCount { expected: usize, got: usize },

    #[error("matrix dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),

    #[error("q = 1 has no deformation; use the classical sequence")]
    QIsOne,

    #[error("deformed number {0}_psi vanishes")]
    VanishingPsiNumber(usize),

    #[error("index {index} exceeds psi-sequence cap {cap}")]
    PsiCap { index: usize, cap: usize },

    #[error("psi-derivative needs nonnegative degrees, found {0}")]
    NegativeDegree(i64),

    #[error("operator truncation {k} below polynomial degree {deg}")]
    OperatorTruncation { k: usize, deg: usize },

    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
