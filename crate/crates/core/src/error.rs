use thiserror::Error;

/// Errors raised while reading instances or running the algorithms.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("crossing arity: crossing {crossing} lists {count} strings, expected 2")]
    CrossingArity { crossing: i64, count: usize },
    #[error("dangling crossing reference: string {string} refers to unknown crossing {crossing}")]
    DanglingCrossing { string: i64, crossing: i64 },
    #[error("inconsistent crossing {crossing}: {reason}")]
    InconsistentCrossing { crossing: i64, reason: String },
    #[error("duplicate id {0}")]
    DuplicateId(i64),
    #[error("not a sphere drawing / inconsistent signs: V - E + F = {euler}, expected {expected}")]
    Euler { euler: i64, expected: i64 },
    #[error("split components first: arrangement has {0} connected components")]
    Disconnected(usize),
    #[error("edge {0} is already covered by the cut-set")]
    EdgeCovered(usize),
    #[error("edge {0} is not an interior edge")]
    NotInterior(usize),
    #[error("not saturating: vertex {0} is not saturated")]
    NotSaturating(usize),
    #[error("not a cut-set: {0}")]
    NotCutSet(String),
    #[error("internal: saturating cut-set does not delimit a rectangle, squares {0:?} admit no grid labeling")]
    NotRectangle(Vec<usize>),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("instance too large for oracle: {size} > cap {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("non-bipartite input: {0}")]
    NotBipartite(String),
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),
    #[error("invalid generator parameters: {0}")]
    InvalidSpec(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
