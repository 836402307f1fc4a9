use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field degree {0} is even; the construction needs q = 2^(2n+1)")]
    EvenDegree(u32),

    #[error("field degree {m} is outside the supported range {min}..={max}")]
    DegreeOutOfRange { m: u32, min: u32, max: u32 },

    #[error("{poly:#x} is not an irreducible polynomial of degree {m} over GF(2)")]
    NotIrreducible { m: u32, poly: u64 },

    #[error("{0} is not a power of two")]
    NotAFieldOrder(u64),

    #[error("element {bits:#x} does not lie in GF({q})")]
    ElementOutOfRange { bits: u32, q: u32 },

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("the zero quadruple is not a projective point")]
    ZeroVector,

    #[error("cannot form a totally isotropic line: {0}")]
    NotALine(String),

    #[error("{what} is capped at q <= {cap} (got q = {q}); use implicit mode")]
    CapExceeded { what: &'static str, q: u32, cap: u32 },

    #[error("cyclic group order must be at least 3, got {0}")]
    CoverOrderTooSmall(u64),

    #[error("exact cover search for m = {m} is outside the budget ({reason})")]
    SearchBudget { m: u64, reason: String },

    #[error("cover is for Z_{got}, but |F*| = {expected}")]
    CoverOrderMismatch { got: u64, expected: u64 },

    #[error("invalid generating set: {0}")]
    InvalidGenerators(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
