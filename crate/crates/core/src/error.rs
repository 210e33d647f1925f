use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: input is not valid UTF-8")]
    Encoding { line: usize },

    #[error("degenerate graph: {vertices} vertices, at least 2 are required for a density")]
    DegenerateGraph { vertices: usize },

    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("topic with {members} predicates cannot be split (at least 4 required)")]
    NotSplittable { members: usize },

    #[error("SPARQL syntax error at byte {position}: {message}")]
    SparqlSyntax { position: usize, message: String },

    #[error("transport error: {0}")]
    Transport(String),

    #[error("endpoint returned HTTP {status}: {snippet}")]
    Endpoint { status: u16, snippet: String },

    #[error("malformed results document: {0}")]
    ResultsFormat(String),

    #[error("snapshot: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
