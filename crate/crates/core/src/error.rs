use thiserror::Error;

/// Errors raised while building, classifying or verifying modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum KacError {
    #[error("invalid deformation context: {0}")]
    InvalidContext(String),

    #[error("invalid highest weight: {0}")]
    InvalidWeight(String),

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("q-bracket [{arg}] = {value} is negative; no real square root")]
    Domain { arg: f64, value: f64 },

    #[error("submodule index {0} out of range 0..=3")]
    Range(i64),

    #[error("submodule V_{0} is empty for this highest weight")]
    EmptyModule(usize),

    #[error("degenerate module: {0}")]
    Degenerate(String),

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("module is typical; no proper invariant subspace")]
    NotNontypical,

    #[error("subspace is not invariant under {0}")]
    NotInvariant(String),

    #[error("generator {0} is not handled by this operation")]
    UnsupportedGenerator(String),

    #[error("missing Cartan matrix {0}")]
    MissingCartan(String),

    #[error("expected dimension {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("no equivalence with the defining representation: {0}")]
    NotEquivalent(String),

    #[error("no rational gauge: {0}")]
    Irrational(String),

    #[error("bundle format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, KacError>;
