use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("field mismatch: F_{{{p1}^{e1}}} vs F_{{{p2}^{e2}}}")]
    FieldMismatch { p1: u32, e1: u32, p2: u32, e2: u32 },
    #[error("{what} needs dimension {dim}, above the cap of {cap}")]
    Resource { what: String, dim: usize, cap: usize },
    #[error("not bar-invariant")]
    NotBarInvariant,
    #[error("not a tilting character")]
    NotTilting,
    #[error("negative coefficients in a character that should come from a module")]
    NegativeCoefficients,
    #[error("no consistent p-adic dimension: {0}")]
    NoConsistentPadicDim(String),
    #[error("not an epimorphism (rank {rank} < {dim})")]
    NotEpimorphism { rank: usize, dim: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("splitting not found: {0}")]
    SplittingNotFound(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}

pub(crate) fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}
