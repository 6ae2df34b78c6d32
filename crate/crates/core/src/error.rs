use std::path::PathBuf;

/// Errors produced by construction, validation, and file ingestion.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json error in {path} at line {line}, column {column}: {msg}")]
    Json {
        path: PathBuf,
        line: usize,
        column: usize,
        msg: String,
    },

    #[error("parse error in {path} at line {line}, field {field}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        field: usize,
        msg: String,
    },

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("invalid spanner: {0}")]
    InvalidSpanner(String),

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("empty separator: contraction requires at least one separator vertex")]
    EmptySeparator,

    #[error("separator inconsistent with tree: {0}")]
    SeparatorMismatch(String),

    #[error(
        "domination violated by tree {tree} on pair ({u}, {v}): tree distance {tree_dist} < metric distance {metric_dist}"
    )]
    DominationViolation {
        tree: usize,
        u: usize,
        v: usize,
        tree_dist: f64,
        metric_dist: f64,
    },

    #[error("oracle supports at most {cap} points, got {n}")]
    OracleCap { n: usize, cap: usize },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
