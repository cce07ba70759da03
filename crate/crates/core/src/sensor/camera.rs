use serde::{Deserialize, Serialize};

use crate::math;
use crate::sdc::ProjectionTable;
use crate::{Error, Result};

/// Pinhole camera. Intrinsics are expressed for the cropped region of
/// interest (`width × height`); the renderer produces the full
/// `render_width × render_height` frame around it and crops the center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CameraIntrinsics {
    pub width: usize,
    pub height: usize,
    pub render_width: usize,
    pub render_height: usize,
    /// Focal length in pixels (square pixels).
    pub fx: f64,
    pub cx: f64,
    pub cy: f64,
    /// Mount offset from the rear axle along the forward axis, meters.
    pub mount_forward: f64,
    pub mount_lateral: f64,
    pub mount_height: f64,
    /// Nose-down pitch, degrees.
    pub pitch_deg: f64,
    pub max_range: f64,
}

impl Default for CameraIntrinsics {
    fn default() -> Self {
        CameraIntrinsics::with_fov(90.0)
    }
}

impl CameraIntrinsics {
    /// 256×256 region of interest cut from a 400×300 render, with the given
    /// horizontal field of view across the region of interest.
    pub fn with_fov(fov_deg: f64) -> Self {
        let width = 256;
        CameraIntrinsics {
            width,
            height: 256,
            render_width: 400,
            render_height: 300,
            fx: (width as f64 / 2.0) / math::tan_deg(fov_deg / 2.0),
            cx: (width as f64 - 1.0) / 2.0,
            cy: (256.0 - 1.0) / 2.0,
            mount_forward: 1.5,
            mount_lateral: 0.0,
            mount_height: 1.6,
            pitch_deg: 0.0,
            max_range: 1000.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.fx.is_finite() || self.fx <= 0.0 {
            return Err(Error::InvalidConfig("camera fx must be positive".into()));
        }
        if self.width != 256 || self.height != 256 {
            return Err(Error::InvalidConfig("camera region of interest must be 256x256".into()));
        }
        if self.render_width < self.width || self.render_height < self.height {
            return Err(Error::InvalidConfig("render size smaller than the region of interest".into()));
        }
        if !self.max_range.is_finite() || self.max_range <= 0.0 {
            return Err(Error::InvalidConfig("camera max range must be positive".into()));
        }
        Ok(())
    }

    /// Top-left corner of the region of interest inside the full render.
    pub fn crop_offset(&self) -> (usize, usize) {
        ((self.render_width - self.width) / 2, (self.render_height - self.height) / 2)
    }

    pub fn projection_table(&self) -> ProjectionTable {
        ProjectionTable::new(self.fx, self.cx)
    }
}
