use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field order {p}^{f} does not fit in 64 bits")]
    FieldTooLarge { p: u64, f: usize },

    #[error("invalid modulus: {0}")]
    BadModulus(String),

    #[error("supplied modulus is not primitive over GF({p})")]
    NotPrimitive { p: u64 },

    #[error("{what}: {a} does not divide {b}")]
    DivisibilityViolated { what: &'static str, a: u64, b: u64 },

    #[error("operation undefined on the zero element")]
    ZeroElement,

    #[error("no primitive 4th root of unity: 4 does not divide {q} - 1")]
    NoFourthRoot { q: u64 },

    #[error("element index {index} out of range for order {order}")]
    ElementOutOfRange { index: u64, order: u64 },

    #[error("element encoding does not match group kind (expected {expected})")]
    EncodingMismatch { expected: &'static str },

    #[error("subgroup descriptor invalid: {0}")]
    BadSubgroup(String),

    #[error("block {block} has {got} entries, expected {expected}")]
    BlockSizeMismatch { block: usize, expected: usize, got: usize },

    #[error("block {block} contains a repeated element")]
    RepeatedBlockElement { block: usize },

    #[error("parameter mismatch: {0}")]
    ParamMismatch(String),

    #[error("congruence precondition violated: {0}")]
    CongruenceViolated(String),

    #[error("T_h is not a union of C_0^(e,q)-orbits at h = {h}: {detail}")]
    FactorizationFailed { h: String, detail: String },

    #[error("D_h fails the {lambda}-transversal condition at h = {h}: class counts {counts:?}")]
    TransversalFailed { h: String, lambda: u64, counts: Vec<u64> },

    #[error("symbolic expression evaluates to zero: {0}")]
    EvaluatesToZero(String),

    #[error("scheme internal consistency failure: {0}")]
    InconsistentScheme(String),

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
