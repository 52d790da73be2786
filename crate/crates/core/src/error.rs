use thiserror::Error;

/// Errors raised by the library. Numeric payloads are reported as `f64`
/// regardless of the scalar type in use.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("strength {strength} and bias {bias} violate strength + |bias| <= 1")]
    ConstraintViolation { bias: f64, strength: f64 },
    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange { name: &'static str, value: f64, min: f64, max: f64 },
    #[error("observable with nonzero strength needs a nonzero direction")]
    ZeroDirection,
    #[error("Bloch vector norm {0} exceeds 1")]
    InvalidBloch(f64),
    #[error("angle {alpha} exceeds arcsin(r) = {limit}")]
    AngleOutOfRange { alpha: f64, limit: f64 },
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("invalid two-qubit state: {0}")]
    InvalidState(String),
    #[error("quality factor {quality} exceeds the reversibility {reversibility}")]
    QualityExceedsReversibility { quality: f64, reversibility: f64 },
    #[error("weak-pointer measurements are defined for unbiased observables only (bias {0})")]
    BiasedWeakPointer(f64),
    #[error("only unital local channels are supported")]
    NonUnitalChannel,
    #[error("negative radicand {0}")]
    NegativeRadicand(f64),
    #[error("no admissible real root for s = {0}")]
    NoRealRoot(f64),
    #[error("{0}")]
    DomainError(String),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("evaluation budget {given} is below the minimum {min}")]
    BudgetTooSmall { given: usize, min: usize },
    #[error("expected {expected} parameters, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("observer index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("schedule infeasible: CHSH value {value} with Bob {bob} does not exceed 2")]
    Infeasible { bob: usize, value: f64 },
    #[error("schedule is not nonlocal: CHSH value {value} with Bob {bob} is at most 2")]
    NotNonlocal { bob: usize, value: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
