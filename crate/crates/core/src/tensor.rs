//! Shapes, multi-indices, regions and row-major index arithmetic.
//!
//! Every tensor is stored as one flat buffer in row-major order: the last
//! dimension varies fastest, so the lexicographic order of multi-indices is
//! the order of their flat offsets.

use std::fmt;

use crate::error::TensorError;

/// Extents `(d_0, ..., d_{n-1})` of an n-dimensional tensor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TensorShape {
    dims: Vec<usize>,
    count: usize,
}

impl TensorShape {
    /// Builds a shape, rejecting `n = 0` and element counts that do not fit
    /// in `isize::MAX`. Zero extents are allowed and give an empty tensor.
    pub fn new(dims: impl Into<Vec<usize>>) -> Result<Self, TensorError> {
        let dims = dims.into();
        if dims.is_empty() {
            return Err(TensorError::EmptyShape);
        }
        let limit = isize::MAX as u128;
        let mut count: u128 = 1;
        for &d in &dims {
            count *= d as u128;
            if count > limit {
                // A later zero extent would still make the tensor empty.
                if dims.contains(&0) {
                    count = 0;
                    break;
                }
                return Err(TensorError::ShapeOverflow { dims });
            }
        }
        Ok(Self {
            dims,
            count: count as usize,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    pub fn element_count(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Row-major strides: `stride[l] = prod_{m > l} d_m`.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.dims.len()];
        for l in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[l] = strides[l + 1] * self.dims[l + 1];
        }
        strides
    }

    /// The region covering the whole tensor, or `None` when it is empty.
    pub fn full_region(&self) -> Option<Region> {
        if self.is_empty() {
            return None;
        }
        Some(Region {
            start: IndexVector(vec![0; self.ndim()]),
            end: IndexVector(self.dims.iter().map(|d| d - 1).collect()),
        })
    }

    /// Checks that `idx` has the right rank and lies inside the tensor.
    pub fn check_index(&self, idx: &IndexVector) -> Result<(), TensorError> {
        check_rank(self.ndim(), idx.len())?;
        for (dim, (&i, &d)) in idx.0.iter().zip(&self.dims).enumerate() {
            if i >= d {
                return Err(TensorError::IndexOutOfBounds {
                    dim,
                    index: i,
                    extent: d,
                });
            }
        }
        Ok(())
    }

    /// Checks that `region` is well formed and contained in the tensor.
    pub fn check_region(&self, region: &Region) -> Result<(), TensorError> {
        check_rank(self.ndim(), region.ndim())?;
        region.validate()?;
        for (dim, (&e, &d)) in region.end.0.iter().zip(&self.dims).enumerate() {
            if e >= d {
                return Err(TensorError::RegionOutOfBounds {
                    dim,
                    end: e,
                    extent: d,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for TensorShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.dims)
    }
}

/// A multi-index `(i_0, ..., i_{n-1})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexVector(pub Vec<usize>);

impl IndexVector {
    pub fn zeros(ndim: usize) -> Self {
        Self(vec![0; ndim])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for IndexVector {
    fn from(v: Vec<usize>) -> Self {
        Self(v)
    }
}

impl<const N: usize> From<[usize; N]> for IndexVector {
    fn from(v: [usize; N]) -> Self {
        Self(v.to_vec())
    }
}

impl fmt::Display for IndexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.0)
    }
}

/// Per-dimension cyclic shifts. Components may be negative or exceed the
/// extent until normalized against a shape.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShiftVector(pub Vec<i64>);

impl ShiftVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for ShiftVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl<const N: usize> From<[i64; N]> for ShiftVector {
    fn from(v: [i64; N]) -> Self {
        Self(v.to_vec())
    }
}

impl fmt::Display for ShiftVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.0)
    }
}

/// An axis-aligned hyperrectangle `[start, end]`, inclusive on both ends.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Region {
    pub start: IndexVector,
    pub end: IndexVector,
}

impl Region {
    pub fn new(start: impl Into<IndexVector>, end: impl Into<IndexVector>) -> Self {
        Self {
            start: start.into(),
            end: end.into(),
        }
    }

    pub fn ndim(&self) -> usize {
        self.start.len()
    }

    /// Fails unless both corners have the same rank and `start <= end`
    /// component-wise.
    pub fn validate(&self) -> Result<(), TensorError> {
        check_rank(self.start.len(), self.end.len())?;
        if self.start.is_empty() {
            return Err(TensorError::EmptyShape);
        }
        for (dim, (&s, &e)) in self.start.0.iter().zip(&self.end.0).enumerate() {
            if s > e {
                return Err(TensorError::InvalidRegion {
                    dim,
                    start: s,
                    end: e,
                });
            }
        }
        Ok(())
    }

    /// Extent along each dimension. Assumes a valid region.
    pub fn extents(&self) -> Vec<usize> {
        self.start
            .0
            .iter()
            .zip(&self.end.0)
            .map(|(&s, &e)| e - s + 1)
            .collect()
    }

    /// Number of elements, in wide arithmetic. Assumes a valid region.
    pub fn element_count(&self) -> u128 {
        self.start
            .0
            .iter()
            .zip(&self.end.0)
            .map(|(&s, &e)| (e - s) as u128 + 1)
            .product()
    }

    /// Number of swap pairs a reversal of this region performs.
    pub fn pair_count(&self) -> u64 {
        (self.element_count() / 2) as u64
    }

    pub fn contains(&self, idx: &IndexVector) -> bool {
        idx.len() == self.ndim()
            && idx
                .0
                .iter()
                .zip(self.start.0.iter().zip(&self.end.0))
                .all(|(&i, (&s, &e))| s <= i && i <= e)
    }

    fn check_contains(&self, idx: &IndexVector) -> Result<(), TensorError> {
        check_rank(self.ndim(), idx.len())?;
        for (dim, (&i, (&s, &e))) in idx
            .0
            .iter()
            .zip(self.start.0.iter().zip(&self.end.0))
            .enumerate()
        {
            if i < s || i > e {
                return Err(TensorError::NotInRegion {
                    dim,
                    index: i,
                    start: s,
                    end: e,
                });
            }
        }
        Ok(())
    }

    /// Iterates the region's indices in lexicographic order.
    pub fn indices(&self) -> RegionIndices<'_> {
        RegionIndices {
            region: self,
            next: Some(self.start.clone()),
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.start, self.end)
    }
}

/// Lexicographic iterator over a valid region.
pub struct RegionIndices<'a> {
    region: &'a Region,
    next: Option<IndexVector>,
}

impl Iterator for RegionIndices<'_> {
    type Item = IndexVector;

    fn next(&mut self) -> Option<IndexVector> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if !advance(&mut succ.0, &self.region.start.0, &self.region.end.0) {
            self.next = Some(succ);
        }
        Some(current)
    }
}

/// A flat row-major element store paired with its shape.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorBuffer<T> {
    shape: TensorShape,
    data: Vec<T>,
}

impl<T> TensorBuffer<T> {
    pub fn new(shape: TensorShape, data: Vec<T>) -> Result<Self, TensorError> {
        if data.len() != shape.element_count() {
            return Err(TensorError::DataLength {
                expected: shape.element_count(),
                actual: data.len(),
            });
        }
        Ok(Self { shape, data })
    }

    /// Builds a buffer by evaluating `f` at every flat offset.
    pub fn from_fn(shape: TensorShape, f: impl FnMut(usize) -> T) -> Self {
        let data = (0..shape.element_count()).map(f).collect();
        Self { shape, data }
    }

    pub fn shape(&self) -> &TensorShape {
        &self.shape
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_parts(self) -> (TensorShape, Vec<T>) {
        (self.shape, self.data)
    }

    pub fn get(&self, idx: &IndexVector) -> Result<&T, TensorError> {
        Ok(&self.data[linearize(&self.shape, idx)?])
    }
}

impl<T: Copy> TensorBuffer<T> {
    pub fn filled(shape: TensorShape, value: T) -> Self {
        let data = vec![value; shape.element_count()];
        Self { shape, data }
    }
}

/// Flat offset of `idx`: `sum_l i_l * prod_{m > l} d_m`.
pub fn linearize(shape: &TensorShape, idx: &IndexVector) -> Result<usize, TensorError> {
    shape.check_index(idx)?;
    let mut offset = 0usize;
    for (&i, &d) in idx.0.iter().zip(shape.dims()) {
        offset = offset * d + i;
    }
    Ok(offset)
}

/// Advances `idx` to its lexicographic successor inside `region`, odometer
/// style. Returns `true` when `idx` was the region's last index; it is then
/// wrapped back to the region start.
pub fn increment_in_region(idx: &mut IndexVector, region: &Region) -> Result<bool, TensorError> {
    region.validate()?;
    region.check_contains(idx)?;
    Ok(advance(&mut idx.0, &region.start.0, &region.end.0))
}

/// Unchecked odometer step shared with the iterator. Returns `true` on wrap.
fn advance(idx: &mut [usize], start: &[usize], end: &[usize]) -> bool {
    for d in (0..idx.len()).rev() {
        if idx[d] < end[d] {
            idx[d] += 1;
            return false;
        }
        idx[d] = start[d];
    }
    true
}

/// Point reflection through the region's center: `j = s + e - i`.
pub fn mirror_index(idx: &IndexVector, region: &Region) -> Result<IndexVector, TensorError> {
    region.validate()?;
    region.check_contains(idx)?;
    Ok(IndexVector(
        idx.0
            .iter()
            .zip(region.start.0.iter().zip(&region.end.0))
            .map(|(&i, (&s, &e))| s + e - i)
            .collect(),
    ))
}

/// The `rank`-th index of `region` in lexicographic order.
pub fn unrank_region_index(rank: u64, region: &Region) -> Result<IndexVector, TensorError> {
    region.validate()?;
    let count = region.element_count();
    if rank as u128 >= count {
        return Err(TensorError::RankOutOfRange {
            rank,
            count: count.min(u64::MAX as u128) as u64,
        });
    }
    let mut idx = vec![0usize; region.ndim()];
    unrank_into(rank, &region.start.0, &region.end.0, &mut idx);
    Ok(IndexVector(idx))
}

/// Mixed-radix decomposition of `rank` over the region extents, written into
/// `out`. The caller guarantees `rank` is in range.
pub(crate) fn unrank_into(mut rank: u64, start: &[usize], end: &[usize], out: &mut [usize]) {
    for d in (0..out.len()).rev() {
        let extent = (end[d] - start[d] + 1) as u64;
        out[d] = start[d] + (rank % extent) as usize;
        rank /= extent;
    }
}

pub(crate) fn check_rank(expected: usize, actual: usize) -> Result<(), TensorError> {
    if expected != actual {
        return Err(TensorError::RankMismatch { expected, actual });
    }
    Ok(())
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    write!(f, "(")?;
    for (n, item) in items.iter().enumerate() {
        if n > 0 {
            write!(f, ",")?;
        }
        write!(f, "{item}")?;
    }
    write!(f, ")")
}
