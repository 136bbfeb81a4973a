//! In-place reversal of a sub-tensor by symmetric pair swaps.
//!
//! A reversal of region `[s, e]` exchanges every index `i` with its mirror
//! `s + e - i`. Walking `i` lexicographically from `s` and stopping once
//! `i >= mirror(i)` visits each pair exactly once, so a region of `N`
//! elements costs `N / 2` swaps and the middle element of an odd region is
//! never touched.
//!
//! Row-major storage makes lexicographic order equal to offset order, and the
//! mirror's offset is `offset(s) + offset(e) - offset(i)`. The kernel tracks
//! only the offset of `i` and swaps whole runs along the last axis.

use std::ptr;

use crate::error::TensorError;
use crate::probe::Probe;
use crate::tensor::{unrank_into, Region, TensorBuffer};

/// Outcome of [`swap_pairs`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct PairRun {
    pub swaps: u64,
    pub exhausted: bool,
}

/// Per-region walking state: `n` carry offsets plus an `n`-component index.
pub(crate) fn state_words(ndim: usize) -> usize {
    2 * ndim
}

/// Swaps up to `count` consecutive pairs of `region`, starting at pair rank
/// `first`, stopping early if the running index meets its mirror.
///
/// # Safety
///
/// `base` must point to a row-major tensor with the given `strides` that
/// contains `region`, valid for reads and writes, and no other thread may
/// access the elements of the pairs being swapped.
pub(crate) unsafe fn swap_pairs<T>(
    base: *mut T,
    strides: &[usize],
    region: &Region,
    first: u64,
    count: u64,
) -> PairRun {
    let n = strides.len();
    let last = n - 1;
    let (s, e) = (&region.start.0[..], &region.end.0[..]);
    let offset = |v: &[usize]| -> usize { v.iter().zip(strides).map(|(a, b)| a * b).sum() };

    // carry[d]: offset change when dimension d increments and every later
    // dimension wraps from e back to s. Always >= 1.
    let mut carry = vec![0usize; n];
    let mut tail = 0usize;
    for d in (0..n).rev() {
        carry[d] = strides[d] - tail;
        tail += (e[d] - s[d]) * strides[d];
    }

    let mut idx = vec![0usize; n];
    unrank_into(first, s, e, &mut idx);
    let mirror_sum = offset(s) + offset(e);
    let mut oi = offset(&idx);
    let mut remaining = count;
    let mut run = PairRun {
        swaps: 0,
        exhausted: false,
    };

    while remaining > 0 {
        let oj = mirror_sum - oi;
        if oi >= oj {
            break;
        }
        let row = (e[last] - idx[last] + 1) as u64;
        let before_crossing = (oj - oi).div_ceil(2) as u64;
        let t = row.min(remaining).min(before_crossing);
        for x in 0..t as usize {
            ptr::swap(base.add(oi + x), base.add(oj - x));
        }
        run.swaps += t;
        remaining -= t;
        if t < row {
            break;
        }

        // Row done: step the odometer from the last element of the row.
        oi += t as usize - 1;
        idx[last] = e[last];
        let mut d = last as isize;
        while d >= 0 {
            let du = d as usize;
            if idx[du] < e[du] {
                idx[du] += 1;
                oi += carry[du];
                break;
            }
            idx[du] = s[du];
            d -= 1;
        }
        if d < 0 {
            run.exhausted = true;
            break;
        }
    }
    run
}

/// Reverses `region` of `buffer` in place.
pub fn reverse_region<T>(buffer: &mut TensorBuffer<T>, region: &Region) -> Result<(), TensorError> {
    reverse_region_with(buffer, region, &mut ())
}

/// [`reverse_region`] reporting to `probe`.
pub fn reverse_region_with<T, P: Probe + ?Sized>(
    buffer: &mut TensorBuffer<T>,
    region: &Region,
    probe: &mut P,
) -> Result<(), TensorError> {
    buffer.shape().check_region(region)?;
    let strides = buffer.shape().strides();
    reverse_checked(buffer.data_mut(), &strides, region, probe);
    Ok(())
}

/// Reversal of a region already validated against the tensor.
pub(crate) fn reverse_checked<T, P: Probe + ?Sized>(
    data: &mut [T],
    strides: &[usize],
    region: &Region,
    probe: &mut P,
) {
    // SAFETY: the region was checked against the shape whose strides we
    // hold, and `data` is exclusively borrowed.
    let run = unsafe { swap_pairs(data.as_mut_ptr(), strides, region, 0, region.pair_count()) };
    if run.exhausted {
        probe.index_exhausted();
    }
    probe.reversal(region, run.swaps);
}

/// Reverses the whole tensor. In row-major layout this is a reversal of the
/// flat buffer. Empty tensors are left alone.
pub fn reverse_full<T>(buffer: &mut TensorBuffer<T>) {
    reverse_full_with(buffer, &mut ())
}

/// [`reverse_full`] reporting to `probe`.
pub fn reverse_full_with<T, P: Probe + ?Sized>(buffer: &mut TensorBuffer<T>, probe: &mut P) {
    let Some(region) = buffer.shape().full_region() else {
        return;
    };
    let data = buffer.data_mut();
    data.reverse();
    probe.reversal(&region, (data.len() / 2) as u64);
}
