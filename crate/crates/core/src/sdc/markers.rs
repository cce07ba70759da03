use alloc::vec;
use alloc::vec::Vec;

use super::tensor::{SdcTensor, COVERAGE, EGO_COL, EGO_ROW, SDC_SIZE};
use crate::classes::PALETTE;
use crate::control::LocalPoint;
use crate::math::round_half_up;

pub const ROUTE_COLOR: [u8; 3] = [255, 255, 255];
pub const WAYPOINT_COLOR: [u8; 3] = [255, 64, 0];
pub const EGO_MARKER_COLOR: [u8; 3] = [0, 255, 255];

const ROUTE_RADIUS: i64 = 4;
const WAYPOINT_RADIUS: i64 = 2;
const BACKGROUND: [u8; 3] = [0, 0, 0];

/// Packed RGB image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<[u8; 3]>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, fill: [u8; 3]) -> Self {
        RgbImage {
            width,
            height,
            data: vec![fill; width * height],
        }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> [u8; 3] {
        self.data[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, px: [u8; 3]) {
        self.data[row * self.width + col] = px;
    }

    fn put(&mut self, row: i64, col: i64, px: [u8; 3]) {
        if row >= 0 && col >= 0 && (row as usize) < self.height && (col as usize) < self.width {
            self.set(row as usize, col as usize, px);
        }
    }

    /// Copy `src` with its top-left corner at `(row, col)`.
    pub fn blit(&mut self, src: &RgbImage, row: usize, col: usize) {
        for r in 0..src.height {
            let dst = (row + r) * self.width + col;
            self.data[dst..dst + src.width].copy_from_slice(&src.data[r * src.width..(r + 1) * src.width]);
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.data.iter().flatten().copied().collect()
    }
}

/// Grid cell `(row, col)` for a local-frame point, clamped to the border.
pub fn local_to_cell(p: LocalPoint) -> (usize, usize) {
    let max = (SDC_SIZE - 1) as f64;
    let col = round_half_up((p.x + COVERAGE / 2.0) / COVERAGE * max).clamp(0.0, max);
    let row = round_half_up((1.0 - p.y / COVERAGE) * max).clamp(0.0, max);
    (row as usize, col as usize)
}

fn disc(img: &mut RgbImage, (row, col): (usize, usize), radius: i64, px: [u8; 3]) {
    let (row, col) = (row as i64, col as i64);
    for dr in -radius..=radius {
        for dc in -radius..=radius {
            if dr * dr + dc * dc <= radius * radius {
                img.put(row + dr, col + dc, px);
            }
        }
    }
}

fn ring(img: &mut RgbImage, (row, col): (usize, usize), radius: i64, px: [u8; 3]) {
    let (row, col) = (row as i64, col as i64);
    let inner = (radius - 1) * (radius - 1);
    for dr in -radius..=radius {
        for dc in -radius..=radius {
            let r2 = dr * dr + dc * dc;
            if r2 <= radius * radius && r2 > inner {
                img.put(row + dr, col + dc, px);
            }
        }
    }
}

/// Color rendering of the grid with a hollow circle at the route point and
/// filled dots at the waypoints. Points outside the coverage are drawn at
/// the border.
pub fn rasterize_markers(sdc: &SdcTensor, route: Option<LocalPoint>, waypoints: &[LocalPoint]) -> RgbImage {
    let mut img = RgbImage::new(SDC_SIZE, SDC_SIZE, BACKGROUND);
    for row in 0..SDC_SIZE {
        for col in 0..SDC_SIZE {
            if let Some(c) = sdc.label(row, col) {
                img.set(row, col, PALETTE[c as usize]);
            }
        }
    }
    for &wp in waypoints {
        disc(&mut img, local_to_cell(wp), WAYPOINT_RADIUS, WAYPOINT_COLOR);
    }
    if let Some(r) = route {
        ring(&mut img, local_to_cell(r), ROUTE_RADIUS, ROUTE_COLOR);
    }
    img
}

/// Small triangle marking the ego anchor at the bottom-center cell.
pub fn draw_ego_marker(img: &mut RgbImage) {
    let (row, col) = (EGO_ROW as i64, EGO_COL as i64);
    for k in 0..4i64 {
        for dc in -k..=k {
            img.put(row - 3 + k, col + dc, EGO_MARKER_COLOR);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_mapping() {
        assert_eq!(local_to_cell(LocalPoint::ORIGIN), (255, 128));
        assert_eq!(local_to_cell(LocalPoint::new(0.0, 64.0)), (0, 128));
        assert_eq!(local_to_cell(LocalPoint::new(-100.0, 500.0)), (0, 0));
        assert_eq!(local_to_cell(LocalPoint::new(100.0, -5.0)), (255, 255));
    }

    #[test]
    fn empty_is_background() {
        let img = rasterize_markers(&SdcTensor::empty(), None, &[]);
        assert!(img.data.iter().all(|&p| p == BACKGROUND));
    }

    #[test]
    fn waypoint_at_origin_marks_bottom_center() {
        let img = rasterize_markers(&SdcTensor::empty(), None, &[LocalPoint::ORIGIN]);
        assert_eq!(img.get(255, 128), WAYPOINT_COLOR);
        assert_eq!(img.get(253, 128), WAYPOINT_COLOR);
        assert_eq!(img.get(250, 128), BACKGROUND);
    }

    #[test]
    fn route_ring_is_hollow() {
        let img = rasterize_markers(&SdcTensor::empty(), Some(LocalPoint::new(0.0, 32.0)), &[]);
        let (r, c) = local_to_cell(LocalPoint::new(0.0, 32.0));
        assert_eq!(img.get(r, c), BACKGROUND);
        assert_eq!(img.get(r - 4, c), ROUTE_COLOR);
        assert_eq!(img.get(r, c + 4), ROUTE_COLOR);
    }

    #[test]
    fn route_at_top_is_clipped_not_dropped() {
        let img = rasterize_markers(&SdcTensor::empty(), Some(LocalPoint::new(0.0, 64.0)), &[]);
        assert_eq!(img.get(4, 128), ROUTE_COLOR);
    }
}
