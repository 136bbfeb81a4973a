use thiserror::Error;

/// Errors raised by shape, index and region validation, and by the rotation
/// and reversal entry points.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("a tensor shape needs at least one dimension")]
    EmptyShape,

    #[error("element count of shape {dims:?} exceeds the addressable limit")]
    ShapeOverflow { dims: Vec<usize> },

    #[error("rank mismatch: expected {expected} components, got {actual}")]
    RankMismatch { expected: usize, actual: usize },

    #[error("index {index} out of bounds for dimension {dim} with extent {extent}")]
    IndexOutOfBounds {
        dim: usize,
        index: usize,
        extent: usize,
    },

    #[error("invalid region: start {start} > end {end} in dimension {dim}")]
    InvalidRegion {
        dim: usize,
        start: usize,
        end: usize,
    },

    #[error("region end {end} exceeds extent {extent} in dimension {dim}")]
    RegionOutOfBounds {
        dim: usize,
        end: usize,
        extent: usize,
    },

    #[error("index component {index} lies outside [{start}, {end}] in dimension {dim}")]
    NotInRegion {
        dim: usize,
        index: usize,
        start: usize,
        end: usize,
    },

    #[error("rank {rank} out of range for a region of {count} elements")]
    RankOutOfRange { rank: u64, count: u64 },

    #[error("data length {actual} does not match element count {expected}")]
    DataLength { expected: usize, actual: usize },

    #[error("{ndim} dimensions exceed the supported maximum of {max}")]
    TooManyDims { ndim: usize, max: usize },

    #[error("worker count must be at least 1")]
    NoWorkers,
}
