use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by a non-invertible scalar {0}")]
    DivisionByZero(String),
    #[error("series needs order {needed} but is only known through {available}")]
    Truncation { needed: i64, available: i64 },
    #[error("function is not expandable at {0}")]
    Unexpandable(String),
    #[error("linear system has no solution (residual {residual})")]
    NoSolution { residual: String },
    #[error("unknown jet direction {0}")]
    UnknownDirection(String),
    #[error("invalid instance: {0}")]
    Validation(String),
    #[error("degenerate configuration at apparent point {0}")]
    DegenerateConfiguration(usize),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("apparent divisor is not generic: {0}")]
    NonGenericApparentDivisor(String),
    #[error("the first summand is an invariant subbundle")]
    InvariantSubbundle,
    #[error("leading coefficient does not match the declared kind at point {0}")]
    KindMismatch(String),
    #[error("point {0} is not an apparent singularity")]
    NotApparent(usize),
    #[error("index out of range: {0}")]
    BadIndex(String),
    #[error("not a deformation direction: {0}")]
    NotADeformationDirection(String),
    #[error("apparent point collides with a pole: {0}")]
    PoleCollision(String),
    #[error("flow left the admissible region at step {step}: {reason}")]
    FlowSingular { step: usize, reason: String },
    #[error("numerical integration failed: {0}")]
    IntegrationFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
