use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown generator symbol `{0}`")]
    UnknownSymbol(String),

    #[error("parse error at position {position}: expected {expected}, found {found}")]
    Parse {
        position: usize,
        expected: String,
        found: String,
    },

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("invalid realization: {0}")]
    InvalidRealization(String),

    #[error("{what} is not unitary (max |A^dag A - I| = {defect:e})")]
    NotUnitary { what: String, defect: f64 },

    #[error("invalid projector partition: {0}")]
    InvalidPartition(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("presentation mismatch: {0}")]
    IncompatiblePresentation(String),

    #[error("operator of size {required} exceeds the configured cap {cap}")]
    SizeCap { required: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("`{0}` is not an element of the second-neighbour set")]
    NotInDelta2(String),

    #[error("vertex {vertex} has in-degree {in_degree} but out-degree {out_degree}")]
    DegreeImbalance {
        vertex: String,
        in_degree: usize,
        out_degree: usize,
    },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("state is not normalized (norm = {0})")]
    NotNormalized(f64),

    #[error("unknown family `{name}`; valid families: {valid}")]
    UnknownFamily { name: String, valid: String },

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
