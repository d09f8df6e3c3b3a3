use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("tail mass {tail_mass:e} above cutoff {cutoff} exceeds tolerance {tail_tol:e}")]
    TailTooHeavy { tail_mass: f64, tail_tol: f64, cutoff: usize },

    #[error("tail tolerance must be positive, got {0}")]
    NonPositiveTolerance(f64),

    #[error("coherent amplitude {0} outside the supported range (|alpha|^2 <= 1400, finite)")]
    AlphaOutOfRange(String),

    #[error("cutoff mismatch: {left} vs {right}")]
    CutoffMismatch { left: usize, right: usize },

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("shifting by {shift} would discard probability mass {lost:e}")]
    ShiftDiscardsMass { shift: usize, lost: f64 },

    #[error("quadratic Rabi frequencies are defined for k = 4 only, got k = {0}")]
    QuadraticRequiresK4(u32),

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("post-selected {outcome} branch has negligible probability {probability:e}")]
    NegligibleBranch { outcome: &'static str, probability: f64 },

    #[error("dip offset index r must be odd, got {0}")]
    EvenR(i64),

    #[error("mean photon number must be positive, got {0}")]
    NonPositiveNbar(f64),

    #[error("degenerate phase-space window: {0}")]
    DegenerateWindow(String),

    #[error("grid has no positive values")]
    EmptyGrid,

    #[error("threshold fraction must lie in (0, 1), got {0}")]
    InvalidThreshold(f64),

    #[error("invalid scan: {0}")]
    InvalidScan(String),

    #[error("cannot parse '{input}': {reason}")]
    Parse { input: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse { input: input.to_string(), reason: reason.into() }
    }
}
