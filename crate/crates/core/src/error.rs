use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid rho: {0}")]
    InvalidRho(String),

    #[error("vertex {vertex}: outgoing weights sum to {sum}, expected 1")]
    RowSum { vertex: String, sum: String },

    #[error("graph is not irreducible")]
    NotIrreducible,

    #[error("graph is not rho-uniform")]
    NotRhoUniform,

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown letter `{0}`")]
    UnknownLetter(String),

    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid extension: {0}")]
    InvalidExtension(String),

    #[error("{what} budget exceeded (limit {limit})")]
    BudgetExceeded { what: &'static str, limit: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
