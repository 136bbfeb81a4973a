use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rotnd_core::format::{AnyTensor, Dtype};
use rotnd_core::{TensorBuffer, TensorShape};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fill {
    /// 1, 2, 3, ... in row-major order.
    Iota,
    Random,
}

/// Builds a tensor of `dtype`. Iota values wrap for `u8`; random `f64`
/// values are uniform in `[0, 1)`.
pub fn generate(shape: TensorShape, dtype: Dtype, fill: Fill, seed: u64) -> AnyTensor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match (dtype, fill) {
        (Dtype::F64, Fill::Iota) => TensorBuffer::from_fn(shape, |i| (i + 1) as f64).into(),
        (Dtype::I64, Fill::Iota) => TensorBuffer::from_fn(shape, |i| (i + 1) as i64).into(),
        (Dtype::U8, Fill::Iota) => TensorBuffer::from_fn(shape, |i| (i + 1) as u8).into(),
        (Dtype::F64, Fill::Random) => TensorBuffer::from_fn(shape, |_| rng.gen::<f64>()).into(),
        (Dtype::I64, Fill::Random) => TensorBuffer::from_fn(shape, |_| rng.gen::<i64>()).into(),
        (Dtype::U8, Fill::Random) => TensorBuffer::from_fn(shape, |_| rng.gen::<u8>()).into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iota_fills() {
        let t = generate(
            TensorShape::new(vec![7]).unwrap(),
            Dtype::I64,
            Fill::Iota,
            0,
        );
        assert_eq!(
            t,
            AnyTensor::I64(TensorBuffer::from_fn(
                TensorShape::new(vec![7]).unwrap(),
                |i| i as i64 + 1
            ))
        );
        match generate(
            TensorShape::new(vec![300]).unwrap(),
            Dtype::U8,
            Fill::Iota,
            0,
        ) {
            AnyTensor::U8(b) => assert_eq!((b.data()[0], b.data()[255], b.data()[256]), (1, 0, 1)),
            _ => unreachable!(),
        }
    }

    #[test]
    fn random_is_seeded() {
        let s = TensorShape::new(vec![4, 5]).unwrap();
        assert_eq!(
            generate(s.clone(), Dtype::F64, Fill::Random, 7),
            generate(s.clone(), Dtype::F64, Fill::Random, 7)
        );
        assert_ne!(
            generate(s.clone(), Dtype::I64, Fill::Random, 7),
            generate(s, Dtype::I64, Fill::Random, 8)
        );
    }
}
