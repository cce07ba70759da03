//! PNG composites of logged frames: depth, perceived semantics and the
//! occupancy grid with route, waypoint and ego markers.

use std::path::Path;

use sdc_core::classes::PALETTE;
use sdc_core::sdc::{draw_ego_marker, project_sdc, rasterize_markers, ProjectionTable, RgbImage};
use sdc_core::sensor::{DepthMap, SemanticImage};
use sdc_core::world::DriveLogFrame;

use crate::{DriveError, Result};

/// Depth at and beyond which pixels render black.
const DEPTH_VIS_RANGE: f64 = 64.0;

pub fn depth_image(depth: &DepthMap) -> RgbImage {
    let mut img = RgbImage::new(depth.width(), depth.height(), [0, 0, 0]);
    for row in 0..depth.height() {
        for col in 0..depth.width() {
            let d = depth.get(row, col).clamp(0.0, DEPTH_VIS_RANGE);
            let v = (255.0 * (1.0 - d / DEPTH_VIS_RANGE)).round() as u8;
            img.set(row, col, [v, v, v]);
        }
    }
    img
}

pub fn semantic_image(sem: &SemanticImage) -> RgbImage {
    let mut img = RgbImage::new(sem.width(), sem.height(), [0, 0, 0]);
    for row in 0..sem.height() {
        for col in 0..sem.width() {
            let c = sem.get(row, col) as usize;
            img.set(row, col, PALETTE.get(c).copied().unwrap_or([255, 0, 255]));
        }
    }
    img
}

/// Depth, perceived semantics and the annotated occupancy grid side by side.
pub fn frame_composite(frame: &DriveLogFrame, table: &ProjectionTable) -> RgbImage {
    let sdc = project_sdc(&frame.semantic_pred, &frame.depth, table);
    let mut grid = rasterize_markers(&sdc, Some(frame.record.route_point), &frame.record.agent_waypoints.0);
    draw_ego_marker(&mut grid);
    let panels = [depth_image(&frame.depth), semantic_image(&frame.semantic_pred), grid];
    let height = panels.iter().map(|p| p.height).max().unwrap_or(0);
    let width = panels.iter().map(|p| p.width).sum();
    let mut out = RgbImage::new(width, height, [0, 0, 0]);
    let mut col = 0;
    for p in &panels {
        out.blit(p, 0, col);
        col += p.width;
    }
    out
}

pub fn save_png(img: &RgbImage, path: &Path) -> Result<()> {
    image::save_buffer(
        path,
        &img.to_bytes(),
        img.width as u32,
        img.height as u32,
        image::ExtendedColorType::Rgb8,
    )
    .map_err(|source| DriveError::Image {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_ramp() {
        let d = DepthMap::from_vec(3, 1, vec![0.0, 32.0, 500.0]);
        let img = depth_image(&d);
        assert_eq!(img.get(0, 0), [255; 3]);
        assert_eq!(img.get(0, 1), [128; 3]);
        assert_eq!(img.get(0, 2), [0; 3]);
    }
}
