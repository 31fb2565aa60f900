use thiserror::Error;

/// Crate-wide error type.
///
/// The CLI maps variants onto exit codes: anything that means "the request
/// itself is unusable" (bad grid, violated precondition, malformed config,
/// bad expression) exits 2, solver non-convergence exits 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what}: no convergence after {iterations} iterations")]
    NonConvergence { what: String, iterations: usize },

    #[error("config error (line {line}): {message}")]
    Config { line: usize, message: String },

    #[error("expression error: {0}")]
    Expr(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for unusable input, 3 for solver failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
