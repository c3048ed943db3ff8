use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("p must satisfy 2 <= p <= 64, got {0}")]
    InvalidP(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("q-binomial [{a} choose {m}] would divide by [p] = 0")]
    QBinomialUndefined { a: i64, m: i64 },
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("antipode is not invertible")]
    SingularAntipode,
    #[error("matrix is singular")]
    Singular,
    #[error("index {index} out of range for dimension {dim}")]
    OutOfRange { index: usize, dim: usize },
    #[error("exponent out of range: {0}")]
    ExponentRange(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
}
