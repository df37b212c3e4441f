use thiserror::Error;

use crate::flow::CutCertificate;
use crate::model::ValidationReport;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("empty instance")]
    EmptyInstance,

    #[error("invalid instance: {0}")]
    InvalidInstance(ValidationReport),

    #[error("invalid bounds: {0}")]
    InvalidBounds(String),

    #[error("infeasible instance: {0}")]
    Infeasible(CutCertificate),

    #[error("undefined density: empty slot set")]
    UndefinedDensity,

    #[error("peak density cap exceeded: {size} slots > cap {cap}")]
    PeakDensityCap { size: usize, cap: usize },

    #[error("enumeration cap exceeded: {slots} slots > cap {cap}")]
    EnumerationCap { slots: usize, cap: usize },

    #[error("instance too large for oracle: {profiles} candidate profiles > cap {cap}")]
    OracleCap { profiles: u128, cap: u128 },

    #[error("EDF check is single-processor only (effective m = {0})")]
    EdfMultiProcessor(usize),

    #[error("certificate verification failed: {0}")]
    CertificateVerification(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("invariant broken: {0}")]
    InvariantBroken(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
