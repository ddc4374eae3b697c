use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("rate {0} is outside [0, 1]")]
    InvalidRate(f64),

    #[error("invalid beta parameters a={a}, b={b}: both must be finite and positive")]
    InvalidBeta { a: f64, b: f64 },

    #[error("prevalence index {index} out of range for a state with {len} prevalence(s)")]
    Index { index: usize, len: usize },

    #[error("model mismatch: {0}")]
    Model(String),

    #[error("elicitation failed: {0}")]
    Elicitation(String),

    #[error("sampler state error: cell {cell} has {count} observations but probability 0")]
    SamplerState { cell: usize, count: u64 },

    #[error(
        "identifiability constraint Se+Sp>1 for classifier {classifier} not met after {attempts} \
         redraws; use more informative priors or disable the constraint"
    )]
    Identifiability { classifier: char, attempts: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("empty chain for quantity {0}")]
    EmptyChain(String),

    #[error("unknown quantity {0}")]
    UnknownQuantity(String),

    #[error("insufficient draws: {0}")]
    InsufficientDraws(String),

    #[error("zero denominator computing {metric} at draw {draw}")]
    Denominator { metric: &'static str, draw: usize },

    #[error("grid too large: {points}^{dims} evaluations exceeds the 1e9 limit")]
    GridSize { points: usize, dims: usize },

    #[error("grid posterior mass underflowed to zero")]
    MassUnderflow,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("prediction lists differ in length: A has {len_a}, B has {len_b}")]
    LengthMismatch { len_a: usize, len_b: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable category, stable across releases.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidRate(_) | Error::InvalidBeta { .. } => "invalid-value",
            Error::Index { .. } => "index",
            Error::Model(_) => "model",
            Error::Elicitation(_) => "elicitation",
            Error::SamplerState { .. } => "sampler-state",
            Error::Identifiability { .. } => "identifiability",
            Error::Config(_) => "config",
            Error::EmptyChain(_) | Error::UnknownQuantity(_) => "chain",
            Error::InsufficientDraws(_) => "insufficient-draws",
            Error::Denominator { .. } => "denominator",
            Error::GridSize { .. } => "grid-size",
            Error::MassUnderflow => "mass-underflow",
            Error::Parse { .. } | Error::LengthMismatch { .. } => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
