use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid channel parameters: {0}")]
    InvalidParams(String),
    #[error("degenerate channel: direct gains h11 and h22 must be nonzero")]
    DegenerateChannel,
    #[error("singular covariance while evaluating {0}")]
    SingularModel(String),
    #[error("unknown observable `{0}`")]
    UnknownObservable(String),
    #[error("observable sets must be nonempty and pairwise disjoint")]
    InvalidSets,
    #[error("relay rate must be positive for this quantizer")]
    InvalidR0,
    #[error("Wyner-Ziv constraint violated: need R0 >= {required}, have {r0}")]
    WynerZivInfeasible { required: f64, r0: f64 },
    #[error("outer bound requires weak interference (INR < SNR for both users)")]
    RegimeViolation,
    #[error("rate region has no feasible nonnegative point")]
    EmptyRegion,
    #[error("rate region is unbounded in the requested direction")]
    Unbounded,
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("search budget of {0} candidates exceeded")]
    SearchBudgetExceeded(u64),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
}

pub type Result<T> = std::result::Result<T, Error>;
