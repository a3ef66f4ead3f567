use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("n must be at least 1")]
    ZeroDimension,

    /// k = 1 gives a single-vertex graph where no induced subgraph can exceed
    /// the independence number.
    #[error("alphabet size k = 1 is not supported (need k >= 2)")]
    DegenerateAlphabet,

    #[error("alphabet size must be at least 2, got {0}")]
    InvalidAlphabet(u64),

    #[error("invalid vertex: {0}")]
    InvalidVertex(String),

    #[error("rank {rank} out of range for {vertex_count} vertices")]
    RankOutOfRange { rank: u64, vertex_count: String },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid witness spec: {0}")]
    InvalidWitness(String),

    #[error("vertex is not a member of the witness subgraph")]
    NotAMember,

    #[error("instance has {vertex_count} vertices, above the enumeration limit {limit}")]
    LimitExceeded { vertex_count: String, limit: u64 },

    #[error("rejection sampler accepted {accepted} of {requested} members after {attempts} draws")]
    SamplingFailed {
        requested: usize,
        accepted: usize,
        attempts: u64,
    },

    #[error("search budget of {budget} nodes exhausted")]
    BudgetExhausted { budget: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("malformed certificate: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
