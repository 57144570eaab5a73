use thiserror::Error;

/// Failures surfaced by the engine. The derivation stages have their own
/// variants because the method is not guaranteed to succeed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series has no nonzero term below its truncation")]
    ZeroSeries,
    #[error("cannot invert an exact non-monomial series without a truncation bound")]
    UnboundedInverse,
    #[error("non-integral power: {0}")]
    NonIntegralPower(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("system is infeasible")]
    Infeasible,
    #[error("no prefactor found within box {0}")]
    NoPhiFound(i64),
    #[error("no h found: {0}")]
    NoHFound(String),
    #[error("not a member of the module: {0}")]
    NotMember(String),
    #[error("verification failure: {0}")]
    VerificationFailure(String),
    #[error("insufficient truncation: need {need}, have {have}")]
    InsufficientTruncation { need: String, have: String },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0}")]
    Diagnostic(String),
}

pub type Result<T> = std::result::Result<T, Error>;
