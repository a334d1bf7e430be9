use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty point set: {0}")]
    EmptySet(&'static str),

    #[error("non-finite coordinate at point {index}")]
    NonFinite { index: usize },

    #[error("zero-length direction vector")]
    ZeroDirection,

    #[error("hulls are not separated (distance {distance:e} <= tolerance {tol:e})")]
    NotSeparated { distance: f64, tol: f64 },

    #[error("point {index} of the second set also occurs in the first set")]
    SharedPoint { index: usize },

    #[error("decomposition invalid: parts ({part_1}, {part_2}) have intersecting hulls")]
    InvalidDecomposition { part_1: usize, part_2: usize },

    #[error("unknown activation '{0}'")]
    UnknownActivation(String),

    #[error("bad activation parameters for '{name}': {reason}")]
    ActivationParams { name: String, reason: String },

    #[error("operation requires {expected} activation, got '{got}'")]
    WrongActivationKind { expected: &'static str, got: String },

    #[error("leaky_relu requires the pre-activation diameter D")]
    MissingDiameter,

    #[error("part count must be at least 1")]
    ZeroParts,

    #[error(
        "delta {delta} does not exceed the minimum {min_delta} for {activation} with L = {parts}"
    )]
    DeltaTooSmall {
        activation: String,
        delta: f64,
        min_delta: f64,
        parts: usize,
    },

    #[error("construction failed at layer {layer}: {reason}")]
    Construction { layer: usize, reason: String },

    #[error("unknown decomposition strategy '{0}'")]
    UnknownStrategy(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("label '{0}' not present in dataset")]
    MissingLabel(String),

    #[error("point {index} appears with labels '{first}' and '{second}'")]
    ConflictingLabels {
        index: usize,
        first: String,
        second: String,
    },

    #[error("{path}: {reason}")]
    Format { path: String, reason: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
