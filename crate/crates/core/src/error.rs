use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("self-loop on vertex `{0}`")]
    SelfLoop(String),
    #[error("conflicting edges between `{0}` and `{1}`")]
    EdgeConflict(String, String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("graphs are defined over different vertex sets")]
    VertexMismatch,
    #[error("graph has a partially directed cycle")]
    NotAmpChainGraph,

    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("`{0}` and `{1}` are adjacent, so no separator exists")]
    Adjacent(String, String),
    #[error("the given set does not separate `{0}` from `{1}`")]
    NotASeparator(String, String),
    #[error("graph is not chordal")]
    NotChordal,

    #[error("insufficient sample: n = {n} with a conditioning set of size {conditioning}")]
    InsufficientSample { n: usize, conditioning: usize },
    #[error("degenerate test: {0}")]
    DegenerateTest(String),
    #[error("singular correlation submatrix")]
    SingularMatrix,
    #[error("invalid dataset: {0}")]
    Dataset(String),
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for violations of an algorithm's preconditions, as opposed to
    /// malformed input.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::InvalidQuery(_)
                | Error::Adjacent(..)
                | Error::NotASeparator(..)
                | Error::NotChordal
                | Error::NotAmpChainGraph
                | Error::InsufficientSample { .. }
                | Error::DegenerateTest(_)
                | Error::SingularMatrix
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
