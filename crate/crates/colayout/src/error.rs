//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// The serde_json source error carries line and column context.
    #[error("failed to parse {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("validation: {0}")]
    Validation(String),
    #[error("unsupported format_version {found} (this reader expects {expected})")]
    FormatVersion { found: u32, expected: u32 },
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("unknown object id `{0}`")]
    UnknownObject(String),
    #[error("layout does not cover movable object `{0}`")]
    LayoutMissing(String),
    #[error("layout references `{0}`, which is not a movable object of the scene")]
    LayoutExtra(String),
    #[error("label `{0}` has a zero marginal count")]
    ZeroMarginal(String),
    #[error("scene needs at least two objects for pairwise relations")]
    SceneTooSmall,
    #[error("corpus contains no scenes")]
    EmptyCorpus,
    #[error("{0}")]
    InvalidArgument(String),
    #[error("no free cell: the robot cannot be placed anywhere in the scene")]
    NoFreeSpace,
    #[error("grid too coarse: need at least 3 cells per axis, got {nx}x{ny}")]
    GridTooCoarse { nx: usize, ny: usize },
    #[error("point ({x}, {y}) does not snap to an accessible cell")]
    Inaccessible { x: f64, y: f64 },
    #[error("path endpoints lie in different connected components")]
    Disconnected,
    #[error("objective is not finite at the initial point")]
    NonFiniteStart,
}

pub type Result<T> = std::result::Result<T, Error>;
