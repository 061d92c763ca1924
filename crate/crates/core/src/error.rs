use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("frequency {frequency} Hz is at or below the waveguide cutoff {cutoff} Hz")]
    BelowCutoff { frequency: f64, cutoff: f64 },

    #[error("leakage constant is undefined for a single-element aperture")]
    UndefinedLeakage,

    #[error(
        "resonance {value} Hz of element {index} is outside the tuning range [{min}, {max}] Hz"
    )]
    ResonanceOutOfRange {
        index: usize,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("weight vector has zero norm after the leakage taper")]
    ZeroNormWeights,

    #[error("resonance grid is empty")]
    EmptyGrid,

    #[error("design carrier {design} Hz does not match scenario carrier {scenario} Hz")]
    CarrierMismatch { design: f64, scenario: f64 },

    #[error("invalid sweep axis: {0}")]
    InvalidAxis(String),

    #[error("config {path}: {reason}")]
    Config { path: PathBuf, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
