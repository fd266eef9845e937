use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid structure class: {0}")]
    InvalidClass(String),

    #[error("n = {n} exceeds the brute-force oracle bound {bound}")]
    OracleTooLarge { n: usize, bound: usize },

    #[error("division by a series with zero constant term")]
    NonUnitDivision,

    #[error("composition requires an inner series with zero constant term")]
    CompositionValuation,

    #[error("cannot divide by x^{shift}: coefficient of x^{index} is nonzero")]
    NotDivisibleByMonomial { shift: usize, index: usize },

    #[error("truncation order must be at least {min}, got {got}")]
    TruncationOrder { min: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no sign change of the root equation found in (0, 1)")]
    NoSignChange,

    #[error("a denominator of the root equation vanishes near x = {x}")]
    DenominatorVanishes { x: f64 },

    #[error("negative radicand at x = {x}")]
    NegativeRadicand { x: f64 },

    #[error("unsupported crossing bound k = {0}")]
    UnsupportedK(usize),

    #[error("insufficient data: need {needed} consecutive entries, have {have}")]
    InsufficientData { needed: usize, have: usize },
}
