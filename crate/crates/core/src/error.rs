use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("field degree must be at least 1")]
    ZeroDegree,
    #[error("field degree {0} exceeds the supported maximum of {max}", max = crate::field::MAX_DEGREE)]
    DegreeTooLarge(u32),
    #[error("modulus {modulus:#b} is not an irreducible polynomial of degree {degree} over Z2")]
    ReducibleModulus { degree: u32, modulus: u32 },
    #[error("field self-test failed: {0}")]
    FieldSelfTest(String),
    #[error("elements belong to different fields")]
    ContextMismatch,
    #[error("value {value} is not an element of GF({order})")]
    ElementOutOfRange { value: u32, order: usize },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("unknown field element `{0}`")]
    UnknownElement(String),

    #[error("degenerate line equation: a = b = 0")]
    DegenerateEquation,
    #[error("ring modulus {0} too small for a ring line (need N >= 2)")]
    RingTooSmall(u32),

    #[error("unknown Pauli operator `{0}`")]
    UnknownPauli(String),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("qubit labeling invalid: {0}")]
    InvalidLabeling(String),
    #[error("operators {first} and {second} do not commute (residual {residual:.3e})")]
    NotCommuting {
        first: usize,
        second: usize,
        residual: f64,
    },
    #[error("no scalar phase relates U_v U_w to U_(v+w) (residual {0:.3e})")]
    ProjectiveFailure(f64),
    #[error("striation {striation}: stabilizers do not define a valid basis under this labeling ({reason})")]
    LabelingInvalid { striation: usize, reason: String },
    #[error("no valid qubit labeling found: {0}")]
    Configuration(String),
    #[error("bases are not mutually unbiased (worst deviation {0:.3e})")]
    NotConjugate(f64),

    #[error("quantum net inconsistent: {0}")]
    NetInconsistent(String),
    #[error("matrix is not Hermitian (residual {0:.3e})")]
    NotHermitian(f64),
    #[error("Wigner value has imaginary residue {0:.3e}")]
    ImaginaryResidue(f64),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("invalid measurement plan: {0}")]
    InvalidPlan(String),
    #[error("counts missing striation {0}")]
    MissingStriation(usize),
    #[error("invalid JSON input: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}
