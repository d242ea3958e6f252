use thiserror::Error;

/// Errors raised by the library.
///
/// Variants fall into three families that the command-line front end maps
/// onto distinct exit codes: malformed input (`Parse`), a value that breaks a
/// type invariant, and a violated operation precondition.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector is not unit-norm (norm {norm})")]
    NonUnitVector { norm: f64 },

    #[error("matrix is not unitary (deviation {deviation:e})")]
    NonUnitary { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid projector: {0}")]
    InvalidProjector(String),

    #[error("only rank-1 projectors are supported (trace {trace})")]
    RankUnsupported { trace: f64 },

    #[error("Born value {value} outside [0, 1]")]
    BornOutOfRange { value: f64 },

    #[error("empty input")]
    EmptyInput,

    #[error("unknown node id {0}")]
    UnknownNode(usize),

    #[error("basis is not orthonormal: {0}")]
    NonOrthonormalBasis(String),

    #[error("context is not a complete orthonormal basis of the space")]
    IncompleteContext,

    #[error("mixed state has no superposition form (largest eigenvalue {max_eigenvalue})")]
    MixedStateNotExpandable { max_eigenvalue: f64 },

    #[error("state is not pure (largest eigenvalue {max_eigenvalue})")]
    NotPure { max_eigenvalue: f64 },

    #[error("records are not informationally complete (rank {rank} of {needed})")]
    Underdetermined { rank: usize, needed: usize },

    #[error("inconsistent measurement records: {0}")]
    InconsistentRecords(String),

    #[error("valuation has no value for node {0}")]
    MissingNodeValue(usize),

    #[error("pair is not contradictory ({0})")]
    NotContradictoryPair(String),

    #[error("valuation refers to graph {found}, expected {expected}")]
    GraphMismatch { expected: String, found: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 1,
            Error::NonUnitVector { .. }
            | Error::NonUnitary { .. }
            | Error::InvalidDensity(_)
            | Error::InvalidProjector(_)
            | Error::RankUnsupported { .. }
            | Error::BornOutOfRange { .. }
            | Error::NonOrthonormalBasis(_)
            | Error::MissingNodeValue(_)
            | Error::Invariant(_) => 2,
            _ => 3,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
