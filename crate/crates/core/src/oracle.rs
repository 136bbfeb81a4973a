//! Copying reference implementations used by tests and `rotnd verify`.
//!
//! These allocate a full output buffer and compute every destination element
//! from its source directly, so they share no code path with the in-place
//! engines beyond index validation.

use crate::error::TensorError;
use crate::tensor::{check_rank, linearize, mirror_index, Region, ShiftVector, TensorBuffer};

/// Fills each destination `j` from source `(j - k) mod d`.
pub fn oracle_rotate<T: Clone>(
    buffer: &TensorBuffer<T>,
    shift: &ShiftVector,
) -> Result<TensorBuffer<T>, TensorError> {
    let shape = buffer.shape();
    check_rank(shape.ndim(), shift.len())?;
    let Some(full) = shape.full_region() else {
        return Ok(buffer.clone());
    };
    let dims = shape.dims();
    let data = full
        .indices()
        .map(|dst| {
            let mut src = 0usize;
            for (l, &j) in dst.0.iter().enumerate() {
                let d = dims[l] as i128;
                let i = (j as i128 - shift.0[l] as i128).rem_euclid(d) as usize;
                src = src * dims[l] + i;
            }
            buffer.data()[src].clone()
        })
        .collect();
    TensorBuffer::new(shape.clone(), data)
}

/// Copy of `buffer` with `region` replaced by its point reflection.
pub fn oracle_reverse<T: Clone>(
    buffer: &TensorBuffer<T>,
    region: &Region,
) -> Result<TensorBuffer<T>, TensorError> {
    buffer.shape().check_region(region)?;
    let mut out = buffer.clone();
    for idx in region.indices() {
        let src = linearize(buffer.shape(), &mirror_index(&idx, region)?)?;
        let dst = linearize(buffer.shape(), &idx)?;
        out.data_mut()[dst] = buffer.data()[src].clone();
    }
    Ok(out)
}
