use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field degree {m} out of range (supported: 1..={max})", max = crate::field::MAX_DEGREE)]
    DegreeOutOfRange { m: u32 },

    #[error("modulus {modulus:#x} does not have degree {m}")]
    ModulusDegree { m: u32, modulus: u64 },

    #[error("modulus {modulus:#x} is reducible: divisible by {factor:#x}")]
    ReducibleModulus { modulus: u32, factor: u32 },

    #[error("elements belong to different fields")]
    FieldMismatch,

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("{s} does not divide the field degree {m}; F_2^{s} is not a subfield")]
    NotASubfield { s: u32, m: u32 },

    #[error("element {value:#x} is out of range for F_2^{m}")]
    ElementOutOfRange { value: u64, m: u32 },

    #[error("cannot parse element {0:?}")]
    ParseElement(String),

    #[error("cannot parse parameters: {0}")]
    ParseParams(String),

    #[error("field degree {got} does not match 2*n*t = {expected}")]
    DimensionMismatch { expected: u32, got: u32 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("linearized equation requires a nonzero linear coefficient")]
    ZeroAlpha,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
