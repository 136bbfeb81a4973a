//! Binary tensor file format.
//!
//! ```text
//! offset  size      field
//! 0       4         magic "NTRT"
//! 4       1         version = 1
//! 5       1         dtype (0 = f64, 1 = i64, 2 = u8)
//! 6       1         ndim, 1..=63
//! 7       1         reserved = 0
//! 8       8*ndim    extents, u64 little-endian
//! ...     N*size    elements, little-endian, row-major
//! ```

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::rotation::MAX_DIMS;
use crate::tensor::{TensorBuffer, TensorShape};

pub const MAGIC: [u8; 4] = *b"NTRT";
pub const VERSION: u8 = 1;
const FIXED_HEADER: usize = 8;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("bad magic {0:?}, expected \"NTRT\"")]
    BadMagic([u8; 4]),
    #[error("unsupported version {0}")]
    UnsupportedVersion(u8),
    #[error("unknown dtype code {0}")]
    UnknownDtype(u8),
    #[error("ndim {0} outside 1..=63")]
    BadRank(u8),
    #[error("reserved header byte is {0}, expected 0")]
    BadReserved(u8),
    #[error("extents {0:?} overflow the element count")]
    DimsOverflow(Vec<u64>),
    #[error("truncated {section}: expected {expected} bytes, found {actual}")]
    Truncated {
        section: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("{0} unexpected bytes after the payload")]
    TrailingBytes(usize),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl FormatError {
    pub fn is_io(&self) -> bool {
        matches!(self, FormatError::Io { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dtype {
    F64,
    I64,
    U8,
}

impl Dtype {
    pub fn code(self) -> u8 {
        match self {
            Dtype::F64 => 0,
            Dtype::I64 => 1,
            Dtype::U8 => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Dtype::F64),
            1 => Some(Dtype::I64),
            2 => Some(Dtype::U8),
            _ => None,
        }
    }

    pub fn size(self) -> usize {
        match self {
            Dtype::F64 | Dtype::I64 => 8,
            Dtype::U8 => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Dtype::F64 => "f64",
            Dtype::I64 => "i64",
            Dtype::U8 => "u8",
        }
    }
}

/// Element types the file format can carry.
pub trait Element: Copy + Send + Sync + PartialEq + std::fmt::Debug + 'static {
    const DTYPE: Dtype;
    fn write_le(self, out: &mut Vec<u8>);
    fn read_le(bytes: &[u8]) -> Self;
}

impl Element for f64 {
    const DTYPE: Dtype = Dtype::F64;
    fn write_le(self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_le_bytes());
    }
    fn read_le(bytes: &[u8]) -> Self {
        f64::from_le_bytes(bytes.try_into().expect("8 bytes"))
    }
}

impl Element for i64 {
    const DTYPE: Dtype = Dtype::I64;
    fn write_le(self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_le_bytes());
    }
    fn read_le(bytes: &[u8]) -> Self {
        i64::from_le_bytes(bytes.try_into().expect("8 bytes"))
    }
}

impl Element for u8 {
    const DTYPE: Dtype = Dtype::U8;
    fn write_le(self, out: &mut Vec<u8>) {
        out.push(self);
    }
    fn read_le(bytes: &[u8]) -> Self {
        bytes[0]
    }
}

/// A tensor of any supported element type.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyTensor {
    F64(TensorBuffer<f64>),
    I64(TensorBuffer<i64>),
    U8(TensorBuffer<u8>),
}

impl AnyTensor {
    pub fn dtype(&self) -> Dtype {
        match self {
            AnyTensor::F64(_) => Dtype::F64,
            AnyTensor::I64(_) => Dtype::I64,
            AnyTensor::U8(_) => Dtype::U8,
        }
    }

    pub fn shape(&self) -> &TensorShape {
        match self {
            AnyTensor::F64(b) => b.shape(),
            AnyTensor::I64(b) => b.shape(),
            AnyTensor::U8(b) => b.shape(),
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        match self {
            AnyTensor::F64(b) => encode(b),
            AnyTensor::I64(b) => encode(b),
            AnyTensor::U8(b) => encode(b),
        }
    }
}

impl From<TensorBuffer<f64>> for AnyTensor {
    fn from(b: TensorBuffer<f64>) -> Self {
        AnyTensor::F64(b)
    }
}

impl From<TensorBuffer<i64>> for AnyTensor {
    fn from(b: TensorBuffer<i64>) -> Self {
        AnyTensor::I64(b)
    }
}

impl From<TensorBuffer<u8>> for AnyTensor {
    fn from(b: TensorBuffer<u8>) -> Self {
        AnyTensor::U8(b)
    }
}

/// Serializes header and payload. Shapes with more than 63 dimensions cannot
/// be represented and panic.
pub fn encode<T: Element>(buffer: &TensorBuffer<T>) -> Vec<u8> {
    let dims = buffer.shape().dims();
    assert!(
        dims.len() <= MAX_DIMS,
        "the file format stores at most 63 dimensions"
    );
    let mut out =
        Vec::with_capacity(FIXED_HEADER + 8 * dims.len() + buffer.data().len() * T::DTYPE.size());
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&[VERSION, T::DTYPE.code(), dims.len() as u8, 0]);
    for &d in dims {
        out.extend_from_slice(&(d as u64).to_le_bytes());
    }
    for &x in buffer.data() {
        x.write_le(&mut out);
    }
    out
}

/// Parses a complete file image.
pub fn decode(bytes: &[u8]) -> Result<AnyTensor, FormatError> {
    if bytes.len() < FIXED_HEADER {
        return Err(FormatError::Truncated {
            section: "header",
            expected: FIXED_HEADER,
            actual: bytes.len(),
        });
    }
    let magic: [u8; 4] = bytes[..4].try_into().expect("4 bytes");
    if magic != MAGIC {
        return Err(FormatError::BadMagic(magic));
    }
    if bytes[4] != VERSION {
        return Err(FormatError::UnsupportedVersion(bytes[4]));
    }
    let dtype = Dtype::from_code(bytes[5]).ok_or(FormatError::UnknownDtype(bytes[5]))?;
    let ndim = bytes[6];
    if ndim == 0 || ndim as usize > MAX_DIMS {
        return Err(FormatError::BadRank(ndim));
    }
    if bytes[7] != 0 {
        return Err(FormatError::BadReserved(bytes[7]));
    }

    let dims_end = FIXED_HEADER + 8 * ndim as usize;
    if bytes.len() < dims_end {
        return Err(FormatError::Truncated {
            section: "extents",
            expected: dims_end - FIXED_HEADER,
            actual: bytes.len() - FIXED_HEADER,
        });
    }
    let raw: Vec<u64> = bytes[FIXED_HEADER..dims_end]
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    let overflow = || FormatError::DimsOverflow(raw.clone());
    let dims = raw
        .iter()
        .map(|&d| usize::try_from(d).map_err(|_| overflow()))
        .collect::<Result<Vec<_>, _>>()?;
    let shape = TensorShape::new(dims).map_err(|_| overflow())?;
    let payload_len = shape
        .element_count()
        .checked_mul(dtype.size())
        .ok_or_else(overflow)?;

    let payload = &bytes[dims_end..];
    if payload.len() < payload_len {
        return Err(FormatError::Truncated {
            section: "payload",
            expected: payload_len,
            actual: payload.len(),
        });
    }
    if payload.len() > payload_len {
        return Err(FormatError::TrailingBytes(payload.len() - payload_len));
    }
    Ok(match dtype {
        Dtype::F64 => AnyTensor::F64(decode_payload(shape, payload)),
        Dtype::I64 => AnyTensor::I64(decode_payload(shape, payload)),
        Dtype::U8 => AnyTensor::U8(decode_payload(shape, payload)),
    })
}

fn decode_payload<T: Element>(shape: TensorShape, payload: &[u8]) -> TensorBuffer<T> {
    let data = payload
        .chunks_exact(T::DTYPE.size())
        .map(T::read_le)
        .collect();
    TensorBuffer::new(shape, data).expect("payload length checked")
}

pub fn read_tensor(path: impl AsRef<Path>) -> Result<AnyTensor, FormatError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| FormatError::Io {
        path: path.to_owned(),
        source,
    })?;
    decode(&bytes)
}

pub fn write_tensor<T: Element>(
    path: impl AsRef<Path>,
    buffer: &TensorBuffer<T>,
) -> Result<(), FormatError> {
    write_bytes(path.as_ref(), &encode(buffer))
}

pub fn write_any(path: impl AsRef<Path>, tensor: &AnyTensor) -> Result<(), FormatError> {
    write_bytes(path.as_ref(), &tensor.encode())
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), FormatError> {
    fs::write(path, bytes).map_err(|source| FormatError::Io {
        path: path.to_owned(),
        source,
    })
}
