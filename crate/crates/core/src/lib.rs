//! In-place cyclic shifts of N-dimensional tensors.
//!
//! A shift by `k` is carried out with one reversal of the whole tensor
//! followed by one reversal of each of the (at most `2^n`) blocks that `k`
//! cuts the tensor into. Every reversal is a sequence of disjoint element
//! swaps, so the rotation needs only `O(n)` words of index state and
//! parallelizes without locks.
//!
//! ```
//! use rotnd_core::{rotate_in_place, TensorBuffer, TensorShape};
//!
//! let shape = TensorShape::new(vec![2, 3]).unwrap();
//! let mut t = TensorBuffer::new(shape, vec![1, 2, 3, 4, 5, 6]).unwrap();
//! rotate_in_place(&mut t, &[1, 2].into()).unwrap();
//! assert_eq!(t.data(), &[5, 6, 4, 2, 3, 1]);
//! ```

pub mod error;
pub mod format;
pub mod oracle;
pub mod parallel;
pub mod probe;
pub mod reversal;
pub mod rotation;
pub mod tensor;

pub use error::TensorError;
pub use oracle::{oracle_reverse, oracle_rotate};
pub use parallel::{
    default_workers, partition_pairs, reverse_region_parallel, reverse_region_parallel_with,
    rotate_in_place_parallel, rotate_in_place_parallel_with, PairRange,
};
pub use probe::{Counters, Probe, StageReport};
pub use reversal::{reverse_full, reverse_full_with, reverse_region, reverse_region_with};
pub use rotation::{
    block_region, normalize_shift, rotate_in_place, rotate_in_place_with, valid_block_count,
    valid_blocks, BlockId, MAX_DIMS,
};
pub use tensor::{
    increment_in_region, linearize, mirror_index, unrank_region_index, IndexVector, Region,
    ShiftVector, TensorBuffer, TensorShape,
};
