use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed function: {0}")]
    InvalidFun(String),
    #[error("codomain mismatch: cod {left} does not match dom {right}")]
    CodMismatch { left: usize, right: usize },
    #[error("domain mismatch: {left} vs {right}")]
    DomMismatch { left: usize, right: usize },
    #[error("function {0} is not surjective")]
    NotEpi(String),
    #[error("function {0} is not injective")]
    NotInjective(String),
    #[error("function {0} is not surjective")]
    NotSurjective(String),
    #[error("size {size} lies outside the window 0..={window}")]
    OutOfWindow { size: usize, window: usize },
    #[error("element level {found} does not match expected level {expected}")]
    LevelMismatch { expected: usize, found: usize },
    #[error("coefficient level {0} is not available")]
    LevelUnavailable(usize),
    #[error("transformation undefined at level {0}")]
    IllTyped(usize),
    #[error("square does not commute")]
    NonCommuting,
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("transformation is not natural: {0}")]
    NotNatural(String),
    #[error("transformation is not semi-cartesian: epi component {witness} is not a bijection")]
    NonSemicartesian { level: usize, witness: String },
    #[error("extracted transformation does not reproduce the input: {0}")]
    RoundTripMismatch(String),
    #[error("level {level} has {size} elements, exceeding the cap {cap}")]
    ResourceBound { level: usize, size: usize, cap: usize },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("unknown builtin: {0}")]
    UnknownBuiltin(String),
}

pub type Result<T> = std::result::Result<T, Error>;
