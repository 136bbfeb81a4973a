//! Cyclic shift of a whole tensor by one global reversal followed by one
//! reversal per block.
//!
//! A normalized shift `k` splits every dimension `l` into a low interval
//! `[0, k_l - 1]` and a high interval `[k_l, d_l - 1]`, carving the tensor
//! into up to `2^n` blocks. After the global reversal each block holds the
//! reversed contents of its diametrically opposite source block; reversing
//! every block in place restores their internal order and completes the
//! shift `i -> (i + k) mod d`.

use crate::error::TensorError;
use crate::probe::Probe;
use crate::reversal::{reverse_checked, reverse_full_with};
use crate::tensor::{check_rank, IndexVector, Region, ShiftVector, TensorBuffer, TensorShape};

/// Largest rank a rotation accepts, so a block selector fits in a `u64`.
pub const MAX_DIMS: usize = 63;

/// Selects one block: bit `l` clear picks the low interval of dimension `l`,
/// bit `l` set picks the high interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockId(pub u64);

impl BlockId {
    pub fn is_high(self, dim: usize) -> bool {
        self.0 >> dim & 1 == 1
    }

    /// The diametrically opposite block over `ndim` dimensions.
    pub fn complement(self, ndim: usize) -> BlockId {
        BlockId(!self.0 & low_mask(ndim))
    }
}

fn low_mask(ndim: usize) -> u64 {
    if ndim >= 64 {
        u64::MAX
    } else {
        (1u64 << ndim) - 1
    }
}

/// Reduces every component into `[0, d_l)` with Euclidean modulo. Extents
/// of 0 or 1 force the component to 0.
pub fn normalize_shift(
    shift: &ShiftVector,
    shape: &TensorShape,
) -> Result<ShiftVector, TensorError> {
    Ok(ShiftVector(
        normalized(shift, shape)?
            .into_iter()
            .map(|k| k as i64)
            .collect(),
    ))
}

fn normalized(shift: &ShiftVector, shape: &TensorShape) -> Result<Vec<usize>, TensorError> {
    check_rank(shape.ndim(), shift.len())?;
    Ok(shift
        .0
        .iter()
        .zip(shape.dims())
        .map(|(&k, &d)| {
            if d <= 1 {
                0
            } else {
                (k as i128).rem_euclid(d as i128) as usize
            }
        })
        .collect())
}

/// Bounds of `block` under a normalized shift, or `None` when one of its
/// intervals is empty.
pub fn block_region(block: BlockId, shift: &ShiftVector, shape: &TensorShape) -> Option<Region> {
    let n = shape.ndim();
    let mut start = Vec::with_capacity(n);
    let mut end = Vec::with_capacity(n);
    for (l, (&k, &d)) in shift.0.iter().zip(shape.dims()).enumerate() {
        let k = k as usize;
        let (s, e) = if block.is_high(l) { (k, d) } else { (0, k) };
        // half-open [s, e) must be nonempty
        if s >= e {
            return None;
        }
        start.push(s);
        end.push(e - 1);
    }
    Some(Region::new(IndexVector(start), IndexVector(end)))
}

/// Nonempty blocks of a normalized shift in ascending `BlockId` order.
///
/// Dimensions with `0 < k_l < d_l` contribute both intervals; any other
/// dimension only has a nonempty high interval. The iterator walks the
/// submasks of the free dimensions, so it never visits an empty block.
pub fn valid_blocks(shift: &[usize], dims: &[usize]) -> ValidBlocks {
    let mut free = 0u64;
    let mut fixed = 0u64;
    let mut empty = false;
    for (l, (&k, &d)) in shift.iter().zip(dims).enumerate() {
        if d == 0 {
            empty = true;
        } else if k > 0 && k < d {
            free |= 1 << l;
        } else {
            fixed |= 1 << l;
        }
    }
    ValidBlocks {
        free,
        fixed,
        next: if empty { None } else { Some(0) },
    }
}

pub struct ValidBlocks {
    free: u64,
    fixed: u64,
    next: Option<u64>,
}

impl Iterator for ValidBlocks {
    type Item = BlockId;

    fn next(&mut self) -> Option<BlockId> {
        let sub = self.next?;
        // ascending submask enumeration; wraps to 0 after the full mask
        let succ = sub.wrapping_sub(self.free) & self.free;
        self.next = if succ == 0 { None } else { Some(succ) };
        Some(BlockId(self.fixed | sub))
    }
}

/// Number of nonempty blocks: `prod_l (2 if 0 < k_l < d_l else 1)`.
pub fn valid_block_count(shift: &[usize], dims: &[usize]) -> u64 {
    if dims.contains(&0) {
        return 0;
    }
    shift
        .iter()
        .zip(dims)
        .map(|(&k, &d)| if k > 0 && k < d { 2 } else { 1 })
        .product()
}

/// Cyclically shifts `buffer` so the element at `i` moves to `(i + k) mod d`.
pub fn rotate_in_place<T>(
    buffer: &mut TensorBuffer<T>,
    shift: &ShiftVector,
) -> Result<(), TensorError> {
    rotate_in_place_with(buffer, shift, &mut ())
}

/// [`rotate_in_place`] reporting each reversal to `probe`.
pub fn rotate_in_place_with<T, P: Probe + ?Sized>(
    buffer: &mut TensorBuffer<T>,
    shift: &ShiftVector,
    probe: &mut P,
) -> Result<(), TensorError> {
    let Some(k) = prepare(buffer.shape(), shift)? else {
        return Ok(());
    };
    let shape = buffer.shape().clone();
    let strides = shape.strides();
    reverse_full_with(buffer, probe);
    let k_signed = ShiftVector(k.iter().map(|&x| x as i64).collect());
    for block in valid_blocks(&k, shape.dims()) {
        let region = block_region(block, &k_signed, &shape)
            .expect("valid_blocks only yields nonempty blocks");
        reverse_checked(buffer.data_mut(), &strides, &region, probe);
    }
    Ok(())
}

/// Validates and normalizes; `None` means the rotation is a no-op.
pub(crate) fn prepare(
    shape: &TensorShape,
    shift: &ShiftVector,
) -> Result<Option<Vec<usize>>, TensorError> {
    let k = normalized(shift, shape)?;
    if shape.ndim() > MAX_DIMS {
        return Err(TensorError::TooManyDims {
            ndim: shape.ndim(),
            max: MAX_DIMS,
        });
    }
    if shape.is_empty() {
        return Ok(None);
    }
    Ok(Some(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probe::Counters;

    fn shape(dims: &[usize]) -> TensorShape {
        TensorShape::new(dims.to_vec()).unwrap()
    }

    fn iota(dims: &[usize]) -> TensorBuffer<i64> {
        TensorBuffer::from_fn(shape(dims), |i| i as i64 + 1)
    }

    /// Shift by copying with the forward map, kept separate from the oracle
    /// module so normalization checks do not lean on it.
    fn copy_rotate(b: &TensorBuffer<i64>, k: &[i64]) -> Vec<i64> {
        let dims = b.shape().dims();
        let mut out = vec![0; b.data().len()];
        for (src, idx) in b.shape().full_region().unwrap().indices().enumerate() {
            let mut dst = 0usize;
            for l in 0..dims.len() {
                let j = (idx.0[l] as i64 + k[l]).rem_euclid(dims[l] as i64) as usize;
                dst = dst * dims[l] + j;
            }
            out[dst] = b.data()[src];
        }
        out
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(
            normalize_shift(&[2].into(), &shape(&[5])).unwrap(),
            ShiftVector::from([2])
        );
        let b = iota(&[7]);
        assert_eq!(copy_rotate(&b, &[-3]), copy_rotate(&b, &[4]));
        assert_eq!(
            normalize_shift(&[-3].into(), &shape(&[7])).unwrap(),
            ShiftVector::from([4])
        );
        let b = iota(&[5, 7]);
        assert_eq!(copy_rotate(&b, &[12, 10]), copy_rotate(&b, &[2, 3]));
        assert_eq!(
            normalize_shift(&[12, 10].into(), &shape(&[5, 7])).unwrap(),
            ShiftVector::from([2, 3])
        );
        assert_eq!(
            normalize_shift(&[5, -9, i64::MIN].into(), &shape(&[1, 0, 3])).unwrap(),
            ShiftVector::from([0, 0, 1])
        );
        assert_eq!(
            normalize_shift(&[1].into(), &shape(&[3, 3])),
            Err(TensorError::RankMismatch {
                expected: 2,
                actual: 1
            })
        );
    }

    #[test]
    fn block_region_examples() {
        let s = shape(&[5, 7]);
        let k = ShiftVector::from([2, 3]);
        assert_eq!(
            block_region(BlockId(0b00), &k, &s),
            Some(Region::new([0, 0], [1, 2]))
        );
        assert_eq!(
            block_region(BlockId(0b11), &k, &s),
            Some(Region::new([2, 3], [4, 6]))
        );
        // bit 0 is dimension 0
        assert_eq!(
            block_region(BlockId(0b01), &k, &s),
            Some(Region::new([2, 0], [4, 2]))
        );
        assert_eq!(block_region(BlockId(0), &[0].into(), &shape(&[7])), None);
    }

    #[test]
    fn valid_blocks_ascending_and_complete() {
        let dims = [4, 1, 5, 3];
        let k = [1, 0, 0, 2];
        let got: Vec<u64> = valid_blocks(&k, &dims).map(|b| b.0).collect();
        let k_signed = ShiftVector(k.iter().map(|&x| x as i64).collect());
        let brute: Vec<u64> = (0..16u64)
            .filter(|&b| block_region(BlockId(b), &k_signed, &shape(&dims)).is_some())
            .collect();
        assert_eq!(got, brute);
        assert_eq!(valid_block_count(&k, &dims), brute.len() as u64);
        assert_eq!(valid_blocks(&[1], &[0]).count(), 0);
    }

    #[test]
    fn golden_rotations() {
        let mut b = iota(&[5]);
        rotate_in_place(&mut b, &[2].into()).unwrap();
        assert_eq!(b.data(), &[4, 5, 1, 2, 3]);

        let mut b = iota(&[2, 3]);
        rotate_in_place(&mut b, &[1, 2].into()).unwrap();
        assert_eq!(b.data(), &[5, 6, 4, 2, 3, 1]);

        let mut b = iota(&[7]);
        rotate_in_place(&mut b, &[3].into()).unwrap();
        assert_eq!(b.data(), &[5, 6, 7, 1, 2, 3, 4]);

        let mut b = iota(&[5, 7]);
        rotate_in_place(&mut b, &[2, 3].into()).unwrap();
        #[rustfmt::skip]
        let expected = [
            26, 27, 28, 22, 23, 24, 25,
            33, 34, 35, 29, 30, 31, 32,
            5, 6, 7, 1, 2, 3, 4,
            12, 13, 14, 8, 9, 10, 11,
            19, 20, 21, 15, 16, 17, 18,
        ];
        assert_eq!(b.data(), &expected);
    }

    #[test]
    fn zero_shift_and_degenerate_shapes() {
        let mut b = iota(&[3, 4, 2]);
        rotate_in_place(&mut b, &[0, 0, 0].into()).unwrap();
        assert_eq!(b, iota(&[3, 4, 2]));

        let mut empty = iota(&[3, 0, 2]);
        rotate_in_place(&mut empty, &[1, 5, -1].into()).unwrap();
        assert!(empty.data().is_empty());

        let mut b = iota(&[2, 3]);
        assert!(matches!(
            rotate_in_place(&mut b, &[1].into()),
            Err(TensorError::RankMismatch { .. })
        ));
    }

    #[test]
    fn rank_cap() {
        let dims = vec![1usize; 64];
        let mut b = TensorBuffer::filled(shape(&dims), 0u8);
        assert_eq!(
            rotate_in_place(&mut b, &ShiftVector(vec![0; 64])),
            Err(TensorError::TooManyDims { ndim: 64, max: 63 })
        );
        let dims = vec![1usize; 63];
        let mut b = TensorBuffer::filled(shape(&dims), 0u8);
        rotate_in_place(&mut b, &ShiftVector(vec![7; 63])).unwrap();
    }

    #[test]
    fn counts_reversals() {
        let mut b = iota(&[5, 7]);
        let mut c = Counters::default();
        rotate_in_place_with(&mut b, &[2, 3].into(), &mut c).unwrap();
        assert_eq!(c.reversals, 5);
        let sizes: Vec<u64> = c.records.iter().map(|r| r.swaps).collect();
        assert_eq!(sizes, vec![17, 3, 4, 4, 6]);

        let mut b = iota(&[5, 7]);
        let mut c = Counters::default();
        rotate_in_place_with(&mut b, &[0, 3].into(), &mut c).unwrap();
        assert_eq!(c.reversals, 3);
    }
}
