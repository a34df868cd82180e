use thiserror::Error;

/// Errors raised by the library.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("generator index {index} out of range for alphabet of rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },

    #[error("alphabet rank must be positive")]
    ZeroRank,

    #[error("index {index} out of range for tuple of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("move requires distinct indices, got i = j = {0}")]
    EqualIndices(usize),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("element does not belong to this group backend: {0}")]
    BackendMismatch(String),

    #[error("group axiom violated: {0}")]
    Axiom(String),

    #[error("invalid group specification: {0}")]
    InvalidSpec(String),

    #[error("operation requires a finite group")]
    InfiniteGroup,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("budget exceeded: {what} requires {required}, limit is {limit}")]
    BudgetExceeded {
        what: String,
        required: u64,
        limit: u64,
    },

    #[error("tuple does not generate the group")]
    NotGenerating,

    #[error("tuple is not a vertex of the queried graph")]
    NotAVertex,

    #[error("no certificate exists: {0}")]
    NoCertificate(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("move sequence does not replay from source to target")]
    ReplayMismatch,

    #[error("certificate of kind nielsen contains an AC move")]
    KindMismatch,

    #[error("json: {0}")]
    Json(String),
}

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }

    /// Stable machine-readable code used in error documents.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::GeneratorOutOfRange { .. } => "generator_out_of_range",
            Error::ZeroRank => "zero_rank",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::EqualIndices(_) => "equal_indices",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::BackendMismatch(_) => "backend_mismatch",
            Error::Axiom(_) => "axiom_violation",
            Error::InvalidSpec(_) => "invalid_spec",
            Error::InfiniteGroup => "infinite_group",
            Error::Unsupported(_) => "unsupported",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::NotGenerating => "not_generating",
            Error::NotAVertex => "not_a_vertex",
            Error::NoCertificate(_) => "no_certificate",
            Error::Hypothesis(_) => "hypothesis_violated",
            Error::ReplayMismatch => "replay_mismatch",
            Error::KindMismatch => "kind_mismatch",
            Error::Json(_) => "json",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
