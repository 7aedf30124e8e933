use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("relation is not reflexive and transitive")]
    NotQuasiOrder,
    #[error("closure is not antisymmetric; load it as a topology instead")]
    NotAntisymmetric,
    #[error("vertex {vertex} out of range for a structure on {n} points")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("structures are limited to 16 points, got {0}")]
    TooLarge(usize),
    #[error("structure must be connected")]
    NotConnected,
    #[error("grafting onto the empty structure is undefined")]
    EmptyOperand,
    #[error("undefined index: the partitioned set is empty")]
    UndefinedIndex,
    #[error("partitions do not cover the same set")]
    PartitionMismatch,
    #[error("unknown element name {0:?}")]
    UnknownElement(String),
    #[error("duplicate element name {0:?}")]
    DuplicateElement(String),
    #[error("malformed class key: {0}")]
    BadKey(String),
    #[error("class key of kind {found} where {expected} was expected")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("{kind} enumeration supports n in 1..={max}, got {n}")]
    UnsupportedSize {
        kind: &'static str,
        n: usize,
        max: usize,
    },
    #[error("law {law} is not defined for {kind} structures")]
    UnsupportedLaw { law: &'static str, kind: &'static str },
    #[error("unknown law {0:?}")]
    UnknownLaw(String),
    #[error("malformed rational {0:?}")]
    BadRational(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
