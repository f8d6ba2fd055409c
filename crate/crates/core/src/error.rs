use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension {n} is outside the supported range 1..={max}")]
    Dimension { n: usize, max: usize },
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("hyperplane coefficient vector is identically zero")]
    ZeroHyperplane,
    #[error("vertex mask {mask:#x} is not a nonzero vertex of Q^{n}")]
    BadVertex { mask: u64, n: usize },
    #[error("vertex set has the origin in its affine hull; no origin-avoiding hyperplane passes through it")]
    OriginInHull,
    #[error("symmetric cover needs k divisible by {required} (n = {n}, k = {k})")]
    NotDivisible { n: usize, k: u64, required: String },
    #[error("unknown catalog cover `{0}`")]
    UnknownCover(String),
    #[error("input sequence sums to {0}, expected 0")]
    NonZeroSum(String),
    #[error("vertex {mask:#x} is not on the hyperplane")]
    NotOnHyperplane { mask: u64 },
    #[error("size guard exceeded: {0}")]
    Guard(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("certificate check failed: {0}")]
    Certificate(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}
