//! Error type shared across the crate.

use thiserror::Error;

/// Convenience alias used by every fallible operation in this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building or running a clustering pipeline.
#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("point cloud must contain at least one point")]
    EmptyCloud,

    #[error("point {index} has {got} coordinates, expected {expected}")]
    DimensionMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },

    #[error("point {index} has a non-finite coordinate")]
    NonFiniteCoordinate { index: usize },

    #[error("got {got} point identifiers for {expected} points")]
    IdCountMismatch { got: usize, expected: usize },

    #[error("point identifier `{0}` appears more than once")]
    DuplicateId(String),

    #[error("precomputed distance matrix: {0}")]
    InvalidPrecomputed(String),

    #[error("k must satisfy 1 <= k <= {n}, got {k}")]
    InvalidK { k: usize, n: usize },

    #[error("neighborhood refinement requires k >= 2, got {0}")]
    KBelowTwo(usize),

    #[error(
        "no within-neighborhood pair distances to pool (every neighborhood is a single point)"
    )]
    EmptyDistancePool,

    #[error("threshold grid: {0}")]
    InvalidGrid(String),

    #[error("Betti vectors have different lengths: {0} vs {1}")]
    ProfileLengthMismatch(usize, usize),

    #[error("profile list is empty")]
    EmptyProfiles,

    #[error("profiles sampled on grids of different lengths: {0} vs {1}")]
    MixedGridLengths(usize, usize),

    #[error("no finite relative changes available to derive default tolerances")]
    NoFiniteChanges,

    #[error("tolerance {name} must be finite and nonnegative, got {value}")]
    InvalidTau { name: &'static str, value: f64 },

    #[error("partition labels must be contiguous from 0: {0}")]
    InvalidLabels(String),

    #[error("no cluster reaches the minimum size {min_size}, cannot reassign")]
    NoSurvivingCluster { min_size: usize },

    #[error("partition covers {got} points, expected {expected}")]
    PartitionSizeMismatch { got: usize, expected: usize },

    #[error("pair counting requires at least two points")]
    TooFewPoints,

    #[error("cluster count must satisfy 1 <= count <= {n}, got {count}")]
    InvalidClusterCount { count: usize, n: usize },

    #[error("invalid {what}: {why}")]
    InvalidParam { what: &'static str, why: String },

    #[error("synthetic generator: {0}")]
    Synth(String),

    #[error("ingest: {0}")]
    Ingest(String),

    #[error("failed to build thread pool: {0}")]
    ThreadPool(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(what: &'static str, why: impl Into<String>) -> Self {
        Error::InvalidParam {
            what,
            why: why.into(),
        }
    }
}
