use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("invalid graph JSON: {0}")]
    Json(String),

    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),

    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),

    #[error("not a tree: {0}")]
    NotATree(String),

    #[error("intersection form is not negative definite")]
    NotNegativeDefinite,

    #[error("lattice vectors live over different graphs")]
    GraphMismatch,

    #[error("vector has non-integral dual coordinates")]
    NonIntegral,

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("cyclotomic number is not rational: coefficients {0:?}")]
    NotRational(Vec<String>),

    #[error("rational function has a pole at 0")]
    PoleAtZero,

    #[error("argument must be nonzero")]
    ZeroArgument,

    #[error("periodic constant: {0}")]
    PeriodicFit(String),

    #[error("P-function has a pole at t=1 (order {0}) for this character and vertex")]
    PoleAtOne(i64),

    #[error("graph is not star-shaped at `{0}`")]
    NotStarShaped(String),

    #[error("leg through `{0}` has a weight above -2, Seifert data would not be normalized")]
    UnnormalizedLeg(String),

    #[error("arguments are not pairwise coprime: {0:?}")]
    NotCoprime(Vec<i64>),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid Spin^c data: {0}")]
    BadSpinC(String),
}

pub type Result<T> = std::result::Result<T, Error>;
