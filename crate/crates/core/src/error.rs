use thiserror::Error;

use crate::invariants::OrbitLabel;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid qudit system: {0}")]
    InvalidSystem(String),

    #[error("invalid basis index: {0}")]
    InvalidIndex(String),

    #[error("factor {factor} out of range for a {m}-factor system")]
    FactorOutOfRange { factor: usize, m: usize },

    #[error("amplitude vector has length {got}, system dimension is {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("state has no nonzero amplitude")]
    ZeroState,

    #[error("operands live on different systems: {0:?} vs {1:?}")]
    SystemMismatch(Vec<usize>, Vec<usize>),

    #[error("invalid marked set: {0}")]
    InvalidMarkedSet(String),

    #[error("every basis state is marked; the unmarked amplitude is undefined")]
    DegenerateSearch,

    #[error("rank bound only holds for 0 < k < k_opt (k = {k}, k_opt = {k_opt})")]
    BoundNotApplicable { k: u64, k_opt: u64 },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("tensor format {0:?} is not supported here")]
    FormatMismatch(Vec<usize>),

    #[error("generic-point classification disagrees across draws: {0:?}")]
    AmbiguousGenericPoint(Vec<OrbitLabel>),

    #[error("exact and floating-point classification disagree: exact {exact}, numeric {numeric}")]
    ToleranceDisagreement { exact: OrbitLabel, numeric: OrbitLabel },

    #[error("multilinear rank {0:?} does not occur in this format")]
    InconsistentRanks(Vec<usize>),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed artifact: {0}")]
    Artifact(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
