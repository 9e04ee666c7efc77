use thiserror::Error;

/// Failures while decoding a PGM byte stream.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PgmError {
    #[error("BadMagic: expected P2 or P5, found {0:?}")]
    BadMagic(String),
    #[error("HeaderParse: {0}")]
    HeaderParse(String),
    #[error("Truncated: expected {expected} samples, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("SampleOutOfRange: sample {sample} at index {index} exceeds maxval {maxval}")]
    SampleOutOfRange {
        index: usize,
        sample: u32,
        maxval: u16,
    },
    #[error("MaxvalOutOfRange: maxval {0} not in [1, 65535]")]
    MaxvalOutOfRange(u64),
    #[error("InvalidImage: {0}")]
    InvalidImage(String),
}

impl PgmError {
    pub fn name(&self) -> &'static str {
        match self {
            PgmError::BadMagic(_) => "BadMagic",
            PgmError::HeaderParse(_) => "HeaderParse",
            PgmError::Truncated { .. } => "Truncated",
            PgmError::SampleOutOfRange { .. } => "SampleOutOfRange",
            PgmError::MaxvalOutOfRange(_) => "MaxvalOutOfRange",
            PgmError::InvalidImage(_) => "InvalidImage",
        }
    }
}

/// Numerical and degeneracy failures in node computation and curve fitting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnhanceError {
    #[error("ConstantImage: every sample equals {0}, no contrast to stretch")]
    ConstantImage(u16),
    #[error(
        "DegenerateNodes: x1={x1}, c1={c1}, c2={c2}, x2={x2} violate the minimum gap {min_gap}"
    )]
    DegenerateNodes {
        x1: f64,
        c1: f64,
        c2: f64,
        x2: f64,
        min_gap: f64,
    },
    #[error("EmptyPartition: D{which} is empty at iteration {iteration}")]
    EmptyPartition { which: u8, iteration: usize },
    #[error("GammaUndefined: exponent equation has numerator {numerator} over zero denominator")]
    GammaUndefined { numerator: f64 },
    #[error("Overflow: {0} is not finite in double precision")]
    Overflow(&'static str),
    #[error("InvalidTargets: {0}")]
    InvalidTargets(String),
    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),
}

impl EnhanceError {
    pub fn name(&self) -> &'static str {
        match self {
            EnhanceError::ConstantImage(_) => "ConstantImage",
            EnhanceError::DegenerateNodes { .. } => "DegenerateNodes",
            EnhanceError::EmptyPartition { .. } => "EmptyPartition",
            EnhanceError::GammaUndefined { .. } => "GammaUndefined",
            EnhanceError::Overflow(_) => "Overflow",
            EnhanceError::InvalidTargets(_) => "InvalidTargets",
            EnhanceError::InvalidConfig(_) => "InvalidConfig",
        }
    }
}
