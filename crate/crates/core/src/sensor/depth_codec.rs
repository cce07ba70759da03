use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Camera depth range in meters.
pub const DEPTH_RANGE: f64 = 1000.0;
const SCALE: f64 = 16_777_215.0; // 256³ − 1
/// One code step in meters.
pub const DEPTH_STEP: f64 = DEPTH_RANGE / SCALE;

/// Depth packed into three 8-bit channels, `R` least significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct EncodedDepthPixel {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl EncodedDepthPixel {
    /// The 24-bit code `R + 256·G + 256²·B`.
    pub fn code(self) -> u32 {
        self.r as u32 | (self.g as u32) << 8 | (self.b as u32) << 16
    }
}

/// `(R + 256·G + 256²·B) / (256³ − 1) × 1000`.
pub fn decode_depth(p: EncodedDepthPixel) -> f64 {
    let numerator = p.r as f64 + 256.0 * p.g as f64 + 65_536.0 * p.b as f64;
    numerator / SCALE * DEPTH_RANGE
}

/// Nearest 24-bit code for `depth`.
pub fn encode_depth(depth: f64) -> Result<EncodedDepthPixel> {
    if !(0.0..=DEPTH_RANGE).contains(&depth) {
        return Err(Error::DepthOutOfRange(depth));
    }
    let code = crate::math::round_half_up(depth / DEPTH_RANGE * SCALE) as u32;
    let code = code.min(SCALE as u32);
    Ok(EncodedDepthPixel {
        r: (code & 0xff) as u8,
        g: ((code >> 8) & 0xff) as u8,
        b: (code >> 16) as u8,
    })
}
