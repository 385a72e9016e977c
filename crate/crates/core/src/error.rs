use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Rejected user input: bad rank, bad block list.
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("not a root: {0}")]
    NotARoot(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A construction produced something its defining properties forbid.
    #[error("construction failed: {0}")]
    Construction(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("malformed polynomial data: {0}")]
    Parse(String),
}
