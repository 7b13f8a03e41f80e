use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid hyper-parameter: {0}")]
    HyperParam(String),

    #[error("family mismatch: {0}")]
    FamilyMismatch(String),

    #[error("Fock cutoff {cap} exceeded: {reason}")]
    CutoffExceeded { cap: usize, reason: String },

    #[error("invalid Fock vector: {0}")]
    InvalidState(String),

    #[error("partner state out of family domain: {0}")]
    PartnerOutOfDomain(String),

    #[error("no feasible grid point for {0}")]
    NoFeasiblePoint(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
