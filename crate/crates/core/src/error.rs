use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("line {line}: cannot parse {text:?} as a number")]
    Parse { line: usize, text: String },

    #[error("scale {j} out of range 1..={max}")]
    Scale { j: usize, max: usize },

    #[error("invalid scale range: {0}")]
    Range(String),

    #[error("scale {j} has undefined Y_j (smallest valid scale is {j_min_valid})")]
    Validity { j: usize, j_min_valid: usize },

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("model {0} has no closed-form tail representation")]
    UnsupportedModel(&'static str),

    #[error("moment of order {p} is infinite for tail exponent {alpha}")]
    InfiniteMoment { p: f64, alpha: f64 },

    #[error("degenerate spectrum: {}", if *.h == 0.0 { "zero slope".to_string() } else { format!("non-positive slope {}", .h) })]
    NonPositiveSlope { h: f64 },

    #[error("need at least {needed} valid scales, found {valid}")]
    InsufficientScales { valid: usize, needed: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable tag, used by the CLI error object and the C API.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parameter(_) => "parameter",
            Error::Input(_) => "input",
            Error::Parse { .. } => "parse",
            Error::Scale { .. } => "scale",
            Error::Range(_) => "range",
            Error::Validity { .. } => "validity",
            Error::DegenerateData(_) => "degenerate_data",
            Error::Numeric(_) => "numeric",
            Error::UnsupportedModel(_) => "unsupported_model",
            Error::InfiniteMoment { .. } => "infinite_moment",
            Error::NonPositiveSlope { .. } => "non_positive_slope",
            Error::InsufficientScales { .. } => "insufficient_scales",
            Error::Domain(_) => "domain",
            Error::Io(_) => "io",
        }
    }
}
