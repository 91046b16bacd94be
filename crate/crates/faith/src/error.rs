use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("polygon has no centroid (empty or degenerate region)")]
    NoCentroid,

    #[error("too few flow vectors: need at least {needed}, got {got}")]
    TooFewVectors { needed: usize, got: usize },

    #[error("every sampled candidate region became empty")]
    AllIterationsDegenerate,

    #[error("scene point is behind the camera (Z = {0})")]
    BehindCamera(f64),

    #[error("no focus of expansion exists for pure lateral motion (W = 0)")]
    NoFoe,

    #[error("no scene points project inside the image")]
    EmptyField,

    #[error("probability map is {map_w}x{map_h} but camera is {cam_w}x{cam_h}")]
    DimensionMismatch {
        map_w: usize,
        map_h: usize,
        cam_w: usize,
        cam_h: usize,
    },

    #[error("all sampled vector pairs were parallel")]
    DegenerateField,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("no clusters to decide on")]
    NoClusters,

    #[error("no results to summarize")]
    EmptyResults,

    #[error("empty trajectory range")]
    EmptyRange,

    #[error("parameter out of range: {0}")]
    Domain(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
