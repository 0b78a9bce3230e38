use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("malformed number `{0}`")]
    BadNumber(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("syntax error at byte {pos}: expected {expected}")]
    Syntax { pos: usize, expected: &'static str },
    #[error("expected a {expected} matrix, found {rows}x{cols}")]
    Shape {
        expected: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("unknown family `{name}`; valid names: {}", valid.join(", "))]
    UnknownFamily { name: String, valid: Vec<String> },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not symplectic")]
    NotSymplectic,
    #[error("upper-right block is not zero or upper-left block is singular")]
    NotBlockTriangular,
    #[error("lower-left block times h^-1 is not symmetric")]
    NotSymmetric,
    #[error("sigma is not in the span")]
    SigmaNotInSpan,
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("tau is not zero")]
    TauNotZero,
    #[error("element is not in Q: {0}")]
    NotInQ(Box<Error>),
    #[error("bracket leaves the span: not a subalgebra")]
    NotASubalgebra,
    #[error("generator outside the ambient algebra {0}")]
    AmbientMismatch(&'static str),
    #[error("h is not in the symmetrizer H(sigma)")]
    NotInHSigma,
    #[error("triple is not in class E: {0}")]
    NotClassE(String),
    #[error("sigma span has dimension zero")]
    SigmaDimZero,
    #[error("h is not lower triangular with nonzero diagonal")]
    NotLowerTriangular,
    #[error("sigma is not orthogonal to sigma_4")]
    SigmaNotInSigma4Perp,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("w0 conjugation leaves the coboundary class: {0}")]
    CrazytauFailed(String),
    #[error("invalid symmetric span: {0}")]
    InvalidSpan(&'static str),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
