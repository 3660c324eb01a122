use thiserror::Error;

use crate::cone::ValidityReport;

/// Every fallible operation in the crate reports through this type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("quadratic numbers with different discriminants ({0} and {1})")]
    Discriminant(u64, u64),
    #[error("cone is not good: {0}")]
    NotGood(ValidityReport),
    #[error("adjacent normals {0} and {1} admit no Delzant witness")]
    NotDelzant(usize, usize),
    #[error("rank-1 Reeb vector: the isotropy data is undefined")]
    RankOne,
    #[error("Reeb vector is not admissible for this cone")]
    Inadmissible,
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("cut rejected: {0}")]
    CutRejected(String),
    #[error("identity violated: {0}")]
    Identity(String),
    #[error("plan replay mismatch at step {step}: {reason}")]
    Replay { step: usize, reason: String },
    #[error("graph assembly failed: {0}")]
    Assembly(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("catalog integrity error: {0}")]
    Integrity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
