use thiserror::Error;

use crate::cubes::ValidationReport;

/// Errors raised by loaders and analyses.
#[derive(Debug, Error)]
pub enum HdaError {
    #[error("invalid model: {0}")]
    Invalid(ValidationReport),

    #[error("unknown cube id `{0}`")]
    UnknownCube(String),

    #[error("empty cube path")]
    EmptyPath,

    #[error("not a cube path: no step from `{from}` to `{to}` at position {position}")]
    NotAPath {
        position: usize,
        from: String,
        to: String,
    },

    #[error("cannot concatenate: `{left}` and `{right}` are not related by a face map")]
    IncompatibleJunction { left: String, right: String },

    #[error("homotopy closure of {path} exceeded the cap of {cap} paths")]
    CapExceeded { cap: usize, path: String },

    #[error("lift leaves the unfolding: depth {depth} exceeded")]
    DepthExceeded { depth: usize },

    #[error("cube map is not total: no image for `{0}`")]
    MapNotTotal(String),

    #[error("labelings use different event sets")]
    MismatchedEvents,

    #[error("a labeling is required for this operation")]
    MissingLabeling,

    #[error("unfolding construction failed: {0}")]
    Unfolding(String),

    /// The lower face `k` of an unfolding node would be a union of several
    /// homotopy classes, so the unfolding is not defined.
    #[error("lower face {k} of unfolding node `{node}` is not a single class: `{first}` and `{second}` are not homotopic")]
    AmbiguousLowerFace {
        node: String,
        k: usize,
        first: String,
        second: String,
    },

    #[error("fan-shaping stalled at {0}")]
    FanShape(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = HdaError> = std::result::Result<T, E>;
