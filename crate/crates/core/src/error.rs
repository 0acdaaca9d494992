use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("tip of zero")]
    TipOfZero,
    #[error("monomial of degree {degree} is beyond the verified cap {cap}")]
    BeyondCap { degree: usize, cap: usize },
    #[error("a degree cap is required: {0}")]
    CapRequired(String),
    #[error("basis is not a Groebner-Shirshov basis: {0}")]
    NotGroebner(String),
    #[error("basis is not reduced: {0}")]
    NotReduced(String),
    #[error("invalid matching: {0}")]
    InvalidMatching(String),
    #[error("matching is not Morse: {0}")]
    NotMorse(String),
    #[error("recursion depth exceeded at {0}")]
    DepthExceeded(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("perturbation is not small: {0}")]
    NotSmall(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("verification failed: {0}")]
    Verification(String),
}
