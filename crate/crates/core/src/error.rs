use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by every fallible operation in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: {what} (expected {expected}, got {got})")]
    SizeMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("non-finite value in {what} at row {row}")]
    NonFiniteValue { what: &'static str, row: usize },
    #[error("empty point cloud")]
    EmptyCloud,
    #[error("point at row {row} lies outside the unit sphere (norm {norm})")]
    NotNormalized { row: usize, norm: f64 },
    #[error("patch size k must be at least 1")]
    KZero,
    #[error("patch size k = {k} exceeds the number of points {n}")]
    KTooLarge { k: usize, n: usize },
    #[error("sample size m = {m} is invalid for {n} points")]
    MTooLarge { m: usize, n: usize },
    #[error("neighbor index entry {value} at row {row} is invalid")]
    InvalidNeighbor { row: usize, value: usize },
    #[error("column sums require a global (N x N) correlation map")]
    NotGlobalMap,
    #[error("dense global map for {n} points needs {bytes} bytes, above the {limit}-byte limit")]
    MapTooLarge {
        n: usize,
        bytes: usize,
        limit: usize,
    },
    #[error("degenerate voxel grid: {0}")]
    DegenerateVoxel(String),
    #[error("sampling stages must be non-empty and strictly decreasing: {0:?}")]
    NonDecreasingStages(Vec<usize>),
    #[error("method `{0}` does not support a requested sample size")]
    UnsizedMethod(&'static str),
    #[error("degenerate neighborhood around point {0}: all neighbors coincide")]
    DegenerateNeighborhood(usize),
    #[error("edge set is empty")]
    EmptyEdgeSet,
    #[error("image has no pixels")]
    EmptyImage,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
