use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::classes::NUM_CLASSES;
use crate::sensor::Grid;
use crate::{Error, Result};

pub const SDC_SIZE: usize = 256;
pub const SDC_CHANNELS: usize = NUM_CLASSES;
/// Forward and lateral extent of the grid, meters.
pub const COVERAGE: f64 = 64.0;
pub const METERS_PER_CELL: f64 = COVERAGE / SDC_SIZE as f64;
pub const EGO_ROW: usize = SDC_SIZE - 1;
pub const EGO_COL: usize = SDC_SIZE / 2;

const EMPTY: u8 = u8::MAX;

/// One-hot 23×256×256 occupancy grid. Stored as one label per cell, which
/// makes the at-most-one-class-per-cell invariant structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdcTensor {
    labels: Grid<u8>,
}

impl Default for SdcTensor {
    fn default() -> Self {
        Self::empty()
    }
}

impl SdcTensor {
    pub fn empty() -> Self {
        SdcTensor {
            labels: Grid::new(SDC_SIZE, SDC_SIZE, EMPTY),
        }
    }

    /// Class occupying `(row, col)`, if any.
    #[inline]
    pub fn label(&self, row: usize, col: usize) -> Option<u8> {
        match self.labels.get(row, col) {
            EMPTY => None,
            c => Some(c),
        }
    }

    /// Panics on an invalid class id.
    #[inline]
    pub fn set(&mut self, row: usize, col: usize, class: u8) {
        assert!((class as usize) < SDC_CHANNELS, "class id {class} out of range");
        self.labels.set(row, col, class);
    }

    #[inline]
    pub fn clear(&mut self, row: usize, col: usize) {
        self.labels.set(row, col, EMPTY);
    }

    /// Value of the one-hot tensor at `[channel, row, col]`.
    #[inline]
    pub fn get(&self, channel: usize, row: usize, col: usize) -> u8 {
        (self.labels.get(row, col) as usize == channel) as u8
    }

    pub fn occupied_cells(&self) -> usize {
        self.labels.as_slice().iter().filter(|&&c| c != EMPTY).count()
    }

    pub fn is_empty(&self) -> bool {
        self.occupied_cells() == 0
    }

    /// Dense `[23, 256, 256]` one-hot array, channel-major.
    pub fn to_one_hot(&self) -> Vec<u8> {
        let n = SDC_SIZE * SDC_SIZE;
        let mut out = vec![0u8; SDC_CHANNELS * n];
        for (i, &c) in self.labels.as_slice().iter().enumerate() {
            if c != EMPTY {
                out[c as usize * n + i] = 1;
            }
        }
        out
    }

    /// Inverse of [`SdcTensor::to_one_hot`]. Rejects non-binary values and
    /// cells with more than one class set.
    pub fn from_one_hot(data: &[u8]) -> Result<Self> {
        let n = SDC_SIZE * SDC_SIZE;
        if data.len() != SDC_CHANNELS * n {
            return Err(Error::ShapeMismatch {
                name: "sdc".into(),
                expected: format!("{} elements", SDC_CHANNELS * n),
                found: format!("{} elements", data.len()),
            });
        }
        let mut t = SdcTensor::empty();
        let labels = t.labels.as_mut_slice();
        for (ch, plane) in data.chunks_exact(n).enumerate() {
            for (i, &v) in plane.iter().enumerate() {
                match v {
                    0 => {}
                    1 if labels[i] == EMPTY => labels[i] = ch as u8,
                    _ => return Err(Error::InvalidConfig("sdc tensor is not one-hot".into())),
                }
            }
        }
        Ok(t)
    }

    /// Per-channel occupancy fraction over a `blocks × blocks` partition of
    /// the grid, laid out `[channel][block_row][block_col]`.
    pub fn pooled(&self, blocks: usize) -> Vec<f64> {
        assert!(blocks > 0 && SDC_SIZE.is_multiple_of(blocks), "blocks must divide the grid");
        let b = SDC_SIZE / blocks;
        let mut out = vec![0.0; SDC_CHANNELS * blocks * blocks];
        for row in 0..SDC_SIZE {
            for (col, &c) in self.labels.row(row).iter().enumerate() {
                if c != EMPTY {
                    out[(c as usize * blocks + row / b) * blocks + col / b] += 1.0;
                }
            }
        }
        let area = (b * b) as f64;
        out.iter_mut().for_each(|v| *v /= area);
        out
    }
}
