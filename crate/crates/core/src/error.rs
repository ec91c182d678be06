use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("monomial is not in normal form")]
    NotNormal,
    #[error("no degree: the zero element has no degree profile")]
    NoDegree,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("NotUnitary: {0}")]
    NotUnitary(String),
    #[error("NotPositiveUnitary: no tree pair found up to {extra_levels} extra expansion levels")]
    NotPositiveUnitary { extra_levels: usize },
    #[error("not a basis: {0}")]
    NotABasis(String),
    #[error("leaf not in set: {0}")]
    LeafNotFound(String),
    #[error("degree too small: {0}")]
    DegreeTooSmall(String),
    #[error("NoIsomorphism: gcd({m1}, r-1) = {g1} differs from gcd({m2}, r-1) = {g2}; gcd invariant: Mat_m1 and Mat_m2 over L_r^t are isomorphic only when these agree")]
    NoIsomorphism { m1: usize, m2: usize, g1: usize, g2: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("homomorphism verification failed: {0}")]
    VerificationFailed(String),
    #[error("NotFixed: the element does not fix the point")]
    NotFixed,
    #[error("malformed point: {0}")]
    MalformedPoint(String),
    #[error("closed form does not apply: {0}; use the enumeration count instead")]
    HypothesisViolated(String),
}

impl Error {
    /// Syntax problems in textual input, as opposed to mathematical failures.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}
