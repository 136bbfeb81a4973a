//! Multi-threaded reversal and rotation.
//!
//! The swap pairs of a reversal touch pairwise disjoint elements, so the pair
//! space `[0, N/2)` can be cut into contiguous ranges and handed to workers
//! with no coordination. Each worker unranks its first pair to a multi-index
//! and walks from there. A rotation runs as two stages separated by a join:
//! the global reversal, then the pairs of every block reversal laid end to
//! end in ascending block order and split evenly.

use std::ops::Range;
use std::thread;

use crate::error::TensorError;
use crate::probe::{Probe, StageReport};
use crate::reversal::{state_words, swap_pairs, PairRun};
use crate::rotation::{block_region, prepare, valid_blocks};
use crate::tensor::{Region, ShiftVector, TensorBuffer};

/// A contiguous slice `[start_pair, end_pair)` of a region's swap pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRange {
    pub start_pair: u64,
    pub end_pair: u64,
    pub region: Region,
}

impl PairRange {
    pub fn len(&self) -> u64 {
        self.end_pair - self.start_pair
    }

    pub fn is_empty(&self) -> bool {
        self.start_pair == self.end_pair
    }
}

/// Splits `[0, total)` into at most `workers` nonempty contiguous ranges
/// whose sizes differ by at most one, larger ranges first.
pub fn split_even(total: u64, workers: usize) -> Vec<Range<u64>> {
    let parts = (workers.max(1) as u64).min(total);
    if parts == 0 {
        return Vec::new();
    }
    let base = total / parts;
    let extra = total % parts;
    let mut start = 0;
    (0..parts)
        .map(|p| {
            let len = base + u64::from(p < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

/// Partitions the swap pairs of `region` among `workers`. Only nonempty
/// ranges are returned.
pub fn partition_pairs(region: &Region, workers: usize) -> Vec<PairRange> {
    split_even(region.pair_count(), workers)
        .into_iter()
        .map(|r| PairRange {
            start_pair: r.start,
            end_pair: r.end,
            region: region.clone(),
        })
        .collect()
}

/// Hardware parallelism capped at the number of swap pairs of an
/// `element_count`-element reversal.
pub fn default_workers(element_count: usize) -> usize {
    let hw = thread::available_parallelism().map_or(1, |n| n.get());
    hw.min(element_count / 2).max(1)
}

/// Base pointer shared by workers whose write sets are disjoint.
struct SharedBase<T>(*mut T);

impl<T> Clone for SharedBase<T> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<T> Copy for SharedBase<T> {}

// SAFETY: workers only touch the elements of their own swap pairs, and the
// pairs of one stage are pairwise disjoint.
unsafe impl<T: Send> Send for SharedBase<T> {}
unsafe impl<T: Send> Sync for SharedBase<T> {}

impl<T> SharedBase<T> {
    fn get(self) -> *mut T {
        self.0
    }
}

/// One reversal's slot in a stage's concatenated pair space.
struct Segment {
    region: Region,
    offset: u64,
    pairs: u64,
}

/// Runs every pair of `segments` on up to `workers` threads and joins them.
/// Returns the swaps actually performed, whether any walk ran off the end of
/// its region, and the number of workers used.
fn run_stage<T: Send>(
    data: &mut [T],
    strides: &[usize],
    segments: &[Segment],
    workers: usize,
) -> (u64, bool, usize) {
    let total: u64 = segments.iter().map(|s| s.pairs).sum();
    let ranges = split_even(total, workers);
    let base = SharedBase(data.as_mut_ptr());

    let work = |range: Range<u64>| -> PairRun {
        let mut acc = PairRun {
            swaps: 0,
            exhausted: false,
        };
        let first = segments.partition_point(|s| s.offset + s.pairs <= range.start);
        for seg in &segments[first..] {
            if seg.offset >= range.end {
                break;
            }
            let lo = range.start.max(seg.offset) - seg.offset;
            let hi = range.end.min(seg.offset + seg.pairs) - seg.offset;
            // SAFETY: every segment region lies inside the tensor described
            // by `strides`, and this worker owns pairs [lo, hi) of it.
            let run = unsafe { swap_pairs(base.get(), strides, &seg.region, lo, hi - lo) };
            acc.swaps += run.swaps;
            acc.exhausted |= run.exhausted;
        }
        acc
    };

    let work = &work;
    let used = ranges.len();
    let runs: Vec<PairRun> = match ranges.len() {
        0 => Vec::new(),
        1 => vec![work(ranges[0].clone())],
        _ => thread::scope(|scope| {
            let handles: Vec<_> = ranges[1..]
                .iter()
                .cloned()
                .map(|r| scope.spawn(move || work(r)))
                .collect();
            let mut runs = vec![work(ranges[0].clone())];
            runs.extend(
                handles
                    .into_iter()
                    .map(|h| h.join().expect("worker panicked")),
            );
            runs
        }),
    };
    let swaps = runs.iter().map(|r| r.swaps).sum();
    let exhausted = runs.iter().any(|r| r.exhausted);
    (swaps, exhausted, used)
}

/// Reverses `region` using up to `workers` threads. The result is identical
/// to [`crate::reverse_region`].
pub fn reverse_region_parallel<T: Send>(
    buffer: &mut TensorBuffer<T>,
    region: &Region,
    workers: usize,
) -> Result<(), TensorError> {
    reverse_region_parallel_with(buffer, region, workers, &mut ())
}

pub fn reverse_region_parallel_with<T: Send, P: Probe + ?Sized>(
    buffer: &mut TensorBuffer<T>,
    region: &Region,
    workers: usize,
    probe: &mut P,
) -> Result<(), TensorError> {
    if workers == 0 {
        return Err(TensorError::NoWorkers);
    }
    buffer.shape().check_region(region)?;
    let strides = buffer.shape().strides();
    let segment = Segment {
        region: region.clone(),
        offset: 0,
        pairs: region.pair_count(),
    };
    let (swaps, exhausted, used) = run_stage(buffer.data_mut(), &strides, &[segment], workers);
    if exhausted {
        probe.index_exhausted();
    }
    probe.reversal(region, swaps);
    probe.stage(&StageReport {
        stage: 1,
        pairs: region.pair_count(),
        swaps,
        workers: used,
        state_words_per_worker: state_words(strides.len()),
    });
    Ok(())
}

/// Parallel [`crate::rotate_in_place`]: the global reversal, a join, then
/// all block reversals at once.
pub fn rotate_in_place_parallel<T: Send>(
    buffer: &mut TensorBuffer<T>,
    shift: &ShiftVector,
    workers: usize,
) -> Result<(), TensorError> {
    rotate_in_place_parallel_with(buffer, shift, workers, &mut ())
}

pub fn rotate_in_place_parallel_with<T: Send, P: Probe + ?Sized>(
    buffer: &mut TensorBuffer<T>,
    shift: &ShiftVector,
    workers: usize,
    probe: &mut P,
) -> Result<(), TensorError> {
    if workers == 0 {
        return Err(TensorError::NoWorkers);
    }
    let Some(k) = prepare(buffer.shape(), shift)? else {
        return Ok(());
    };
    let shape = buffer.shape().clone();
    let strides = shape.strides();
    let words = state_words(shape.ndim());

    let global = shape.full_region().expect("nonempty after prepare");
    let global_pairs = global.pair_count();
    let stage1 = [Segment {
        region: global.clone(),
        offset: 0,
        pairs: global_pairs,
    }];
    let (swaps, exhausted, used) = run_stage(buffer.data_mut(), &strides, &stage1, workers);
    if exhausted {
        probe.index_exhausted();
    }
    probe.reversal(&global, swaps);
    probe.stage(&StageReport {
        stage: 1,
        pairs: global_pairs,
        swaps,
        workers: used,
        state_words_per_worker: words,
    });

    let k_signed = ShiftVector(k.iter().map(|&x| x as i64).collect());
    let mut offset = 0;
    let segments: Vec<Segment> = valid_blocks(&k, shape.dims())
        .map(|b| {
            let region = block_region(b, &k_signed, &shape).expect("nonempty block");
            let pairs = region.pair_count();
            let seg = Segment {
                region,
                offset,
                pairs,
            };
            offset += pairs;
            seg
        })
        .collect();
    let (swaps, exhausted, used) = run_stage(buffer.data_mut(), &strides, &segments, workers);
    if exhausted {
        probe.index_exhausted();
    }
    for seg in &segments {
        probe.reversal(&seg.region, seg.pairs);
    }
    probe.stage(&StageReport {
        stage: 2,
        pairs: offset,
        swaps,
        workers: used,
        state_words_per_worker: words,
    });
    Ok(())
}
