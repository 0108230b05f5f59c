use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("occupation ({n_a}, {n_b}) outside truncated basis with n_max = {n_max}")]
    OccupationOutOfRange {
        n_a: usize,
        n_b: usize,
        n_max: usize,
    },

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("state is not normalized (squared norm {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error(
        "truncation unsafe: state has support on {max_total} total photons but n_max = {n_max}; \
         the beamsplitter would leak amplitude outside the truncated basis"
    )]
    TruncationUnsafe { max_total: usize, n_max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate beamsplitter (r = {r}): the asymmetric criterion divides by r^2 t^2")]
    DegenerateBeamSplitter { r: f64 },

    #[error("matrix is not a valid density operator: {0}")]
    InvalidDensity(String),

    #[error("unknown named state `{0}`")]
    UnknownState(String),

    #[error("{field}: {message}")]
    Field { field: String, message: String },

    #[error("JSON error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

impl Error {
    pub(crate) fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Field {
            field: field.into(),
            message: message.into(),
        }
    }
}
