//! Binary tensor container: `SDCT` magic, format version, dtype, rank, a
//! reserved byte, little-endian `u32` dimensions, then the little-endian
//! payload in row-major order.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::{DriveError, Result};

pub const MAGIC: &[u8; 4] = b"SDCT";
pub const VERSION: u8 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum TensorData {
    U8(Vec<u8>),
    F32(Vec<f32>),
    F64(Vec<f64>),
}

impl TensorData {
    fn code(&self) -> u8 {
        match self {
            TensorData::U8(_) => 0,
            TensorData::F32(_) => 1,
            TensorData::F64(_) => 2,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            TensorData::U8(v) => v.len(),
            TensorData::F32(v) => v.len(),
            TensorData::F64(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StoredTensor {
    pub shape: Vec<usize>,
    pub data: TensorData,
}

impl StoredTensor {
    pub fn into_u8(self, path: &Path) -> Result<(Vec<usize>, Vec<u8>)> {
        match self.data {
            TensorData::U8(v) => Ok((self.shape, v)),
            _ => Err(DriveError::format(path, "expected a u8 tensor")),
        }
    }
}

pub fn encode(shape: &[usize], data: &TensorData) -> Vec<u8> {
    assert_eq!(shape.iter().product::<usize>(), data.len(), "tensor shape does not match data");
    let mut out = Vec::with_capacity(8 + 4 * shape.len() + 8 * data.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&[VERSION, data.code(), shape.len() as u8, 0]);
    for &d in shape {
        out.extend_from_slice(&(d as u32).to_le_bytes());
    }
    match data {
        TensorData::U8(v) => out.extend_from_slice(v),
        TensorData::F32(v) => v.iter().for_each(|x| out.extend_from_slice(&x.to_le_bytes())),
        TensorData::F64(v) => v.iter().for_each(|x| out.extend_from_slice(&x.to_le_bytes())),
    }
    out
}

pub fn decode(bytes: &[u8], path: &Path) -> Result<StoredTensor> {
    let bad = |m: &str| DriveError::format(path, m);
    if bytes.len() < 8 || &bytes[..4] != MAGIC {
        return Err(bad("not a tensor container (bad magic)"));
    }
    if bytes[4] != VERSION {
        return Err(bad(&format!("unsupported tensor container version {}", bytes[4])));
    }
    let (dtype, ndim) = (bytes[5], bytes[6] as usize);
    let header = 8 + 4 * ndim;
    if bytes.len() < header {
        return Err(bad("truncated tensor header"));
    }
    let shape: Vec<usize> = bytes[8..header]
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()) as usize)
        .collect();
    let n: usize = shape.iter().product();
    let payload = &bytes[header..];
    let width = match dtype {
        0 => 1,
        1 => 4,
        2 => 8,
        d => return Err(bad(&format!("unknown dtype code {d}"))),
    };
    if payload.len() != n * width {
        return Err(bad(&format!("payload has {} bytes, shape {:?} needs {}", payload.len(), shape, n * width)));
    }
    let data = match dtype {
        0 => TensorData::U8(payload.to_vec()),
        1 => TensorData::F32(payload.chunks_exact(4).map(|c| f32::from_le_bytes(c.try_into().unwrap())).collect()),
        _ => TensorData::F64(payload.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect()),
    };
    Ok(StoredTensor { shape, data })
}

pub fn write_tensor(path: &Path, shape: &[usize], data: &TensorData) -> Result<()> {
    let file = File::create(path).map_err(DriveError::io(path))?;
    let mut w = BufWriter::new(file);
    w.write_all(&encode(shape, data)).map_err(DriveError::io(path))?;
    w.flush().map_err(DriveError::io(path))
}

pub fn read_tensor(path: &Path) -> Result<StoredTensor> {
    let mut bytes = Vec::new();
    let file = File::open(path).map_err(DriveError::io(path))?;
    BufReader::new(file).read_to_end(&mut bytes).map_err(DriveError::io(path))?;
    decode(&bytes, path)
}
