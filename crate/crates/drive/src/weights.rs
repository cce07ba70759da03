//! Weight-bundle files: a text header listing every tensor's name, dtype and
//! shape, terminated by `end`, followed by the little-endian f32 payloads in
//! header order.
//!
//! ```text
//! SDCWEIGHTS v1
//! tensor reduce.weight f32 232 384
//! tensor reduce.bias f32 232
//! ...
//! end
//! <binary payload>
//! ```

use std::fs;
use std::path::Path;

use sdc_core::control::{Tensor, WeightBundle};

use crate::{DriveError, Result};

const HEADER: &str = "SDCWEIGHTS v1";

pub fn encode_weights(bundle: &WeightBundle) -> Vec<u8> {
    let mut head = String::from(HEADER);
    head.push('\n');
    for (name, t) in &bundle.tensors {
        head.push_str(&format!("tensor {name} f32"));
        for d in &t.shape {
            head.push_str(&format!(" {d}"));
        }
        head.push('\n');
    }
    head.push_str("end\n");
    let mut out = head.into_bytes();
    for t in bundle.tensors.values() {
        t.data.iter().for_each(|v| out.extend_from_slice(&v.to_le_bytes()));
    }
    out
}

pub fn decode_weights(bytes: &[u8], path: &Path) -> Result<WeightBundle> {
    let bad = |m: String| DriveError::format(path, m);
    let mut pos = 0;
    let mut next_line = || -> Result<&str> {
        let rest = &bytes[pos..];
        let end = rest.iter().position(|&b| b == b'\n').ok_or_else(|| bad("unterminated weight header".into()))?;
        pos += end + 1;
        std::str::from_utf8(&rest[..end]).map_err(|_| bad("weight header is not UTF-8".into()))
    };
    if next_line()? != HEADER {
        return Err(bad(format!("missing '{HEADER}' header line")));
    }
    let mut specs: Vec<(String, Vec<usize>)> = Vec::new();
    loop {
        let line = next_line()?;
        if line == "end" {
            break;
        }
        let mut parts = line.split_whitespace();
        let (Some("tensor"), Some(name), Some(dtype)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad(format!("malformed header line '{line}'")));
        };
        if dtype != "f32" {
            return Err(bad(format!("tensor {name}: unsupported dtype {dtype}")));
        }
        let shape = parts
            .map(|d| d.parse::<usize>().map_err(|_| bad(format!("tensor {name}: bad dimension '{d}'"))))
            .collect::<Result<Vec<_>>>()?;
        if specs.iter().any(|(n, _)| n == name) {
            return Err(bad(format!("duplicate tensor {name}")));
        }
        specs.push((name.to_string(), shape));
    }
    let mut payload = &bytes[pos..];
    let mut bundle = WeightBundle::default();
    for (name, shape) in specs {
        let n: usize = shape.iter().product();
        if payload.len() < 4 * n {
            return Err(bad(format!("payload truncated in tensor {name}")));
        }
        let (chunk, rest) = payload.split_at(4 * n);
        let data = chunk.chunks_exact(4).map(|c| f32::from_le_bytes(c.try_into().unwrap())).collect();
        bundle.insert(&name, Tensor::new(shape, data)?);
        payload = rest;
    }
    if !payload.is_empty() {
        return Err(bad(format!("{} trailing payload bytes", payload.len())));
    }
    Ok(bundle)
}

pub fn save_weights(path: &Path, bundle: &WeightBundle) -> Result<()> {
    fs::write(path, encode_weights(bundle)).map_err(DriveError::io(path))
}

pub fn load_weights(path: &Path) -> Result<WeightBundle> {
    let bytes = fs::read(path).map_err(DriveError::io(path))?;
    decode_weights(&bytes, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sdc_core::control::{NetworkDims, NetworkWeights};

    fn dims() -> NetworkDims {
        NetworkDims {
            features: 8,
            hidden: 4,
            mlp_hidden: 3,
        }
    }

    #[test]
    fn round_trip() {
        let b = WeightBundle::random(dims(), 9);
        let bytes = encode_weights(&b);
        let back = decode_weights(&bytes, Path::new("mem")).unwrap();
        assert_eq!(back, b);
        NetworkWeights::from_bundle(&back).unwrap();
    }

    #[test]
    fn header_is_readable_text() {
        let bytes = encode_weights(&WeightBundle::zeros(dims()));
        let text = String::from_utf8_lossy(&bytes[..200]);
        assert!(text.starts_with("SDCWEIGHTS v1\n"));
        assert!(text.contains("tensor gru.weight_hh f32 12 4\n"));
    }

    #[test]
    fn rejects_truncation_and_garbage() {
        let bytes = encode_weights(&WeightBundle::zeros(dims()));
        let p = Path::new("mem");
        assert!(decode_weights(&bytes[..bytes.len() - 2], p).is_err());
        let mut extra = bytes.clone();
        extra.push(0);
        assert!(decode_weights(&extra, p).is_err());
        assert!(decode_weights(b"NOPE\n", p).is_err());
    }
}
