use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("modulus q={0} must be even and in [2, 64]")]
    InvalidModulus(u32),
    #[error("{m} variables exceeds the supported maximum of {max}")]
    TooManyVariables { m: usize, max: usize },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("modulus mismatch: q={left} vs q={right}")]
    ModulusMismatch { left: u32, right: u32 },
    #[error("variable count mismatch: m={left} vs m={right}")]
    ShapeMismatch { left: usize, right: usize },
    #[error("coefficient {value} at index {index} is not a residue mod {q}")]
    CoefficientRange { index: usize, value: u32, q: u32 },
    #[error("order r={r} out of range for m={m}: {reason}")]
    InvalidOrder { r: usize, m: usize, reason: &'static str },
    #[error("ZRM codes require q >= 4, got q={0}")]
    ZrmModulus(u32),
    #[error("{0}")]
    InvalidIndices(String),
    #[error("not a permutation of 0..{n}: {perm:?}")]
    InvalidPermutation { perm: Vec<usize>, n: usize },
    #[error("p={p} does not divide q={q}")]
    DivisorMismatch { p: u32, q: u32 },
    #[error("unsupported p={0}")]
    UnsupportedP(u32),
    #[error("value {value} is not a multiple of q/p={step}")]
    NotOnGrid { value: u32, step: u32 },
    #[error("sequence has unsupported entries; a polyphase sequence is required")]
    NotPolyphase,
    #[error("entry {index} breaks the support invariant")]
    SupportViolation { index: usize },
    #[error("work of {requested} exceeds the cap of {cap}")]
    CapExceeded { requested: u128, cap: u128 },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("identity violated: {0}")]
    Verification(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidModulus(_) => "invalid-modulus",
            Error::TooManyVariables { .. } => "too-many-variables",
            Error::LengthMismatch { .. } => "length-mismatch",
            Error::ModulusMismatch { .. } => "modulus-mismatch",
            Error::ShapeMismatch { .. } => "shape-mismatch",
            Error::CoefficientRange { .. } => "coefficient-range",
            Error::InvalidOrder { .. } => "invalid-order",
            Error::ZrmModulus(_) => "zrm-modulus",
            Error::InvalidIndices(_) => "invalid-indices",
            Error::InvalidPermutation { .. } => "invalid-permutation",
            Error::DivisorMismatch { .. } => "divisor-mismatch",
            Error::UnsupportedP(_) => "unsupported-p",
            Error::NotOnGrid { .. } => "not-on-grid",
            Error::NotPolyphase => "not-polyphase",
            Error::SupportViolation { .. } => "support-violation",
            Error::CapExceeded { .. } => "cap-exceeded",
            Error::Empty(_) => "empty",
            Error::Parse(_) => "parse",
            Error::Verification(_) => "verification",
            Error::Config(_) => "config",
        }
    }
}
