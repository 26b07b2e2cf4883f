use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid sector: N = {particles} particles in M = {modes} modes (need 0 <= N <= M <= {max_modes})")]
    InvalidSector {
        modes: usize,
        particles: usize,
        max_modes: usize,
    },

    #[error("dimension {dim} exceeds the configured cap {cap}")]
    DimensionOverflow { dim: u64, cap: u64 },

    #[error("mode index {mode} out of range for M = {modes}")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error("pairing state needs even M and N (got M = {modes}, N = {particles})")]
    Parity { modes: usize, particles: usize },

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("trace is not 1 (got {0})")]
    TraceNormalization(f64),

    #[error("matrix is not an orthogonal projection (max deviation {0:e})")]
    NotProjection(f64),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An optimizer run beat `sqrt(5) N`; carries the full report.
    #[error("||gamma2||_HS = {} exceeds sqrt(5) N = {}", .0.best_value, .0.sqrt5_n)]
    HsBoundExceeded(Box<crate::extremal::ExtremalResult>),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
