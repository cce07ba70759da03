use alloc::vec::Vec;

use super::tensor::{SdcTensor, COVERAGE, SDC_SIZE};
use crate::classes;
use crate::math::round_half_up;
use crate::sensor::{DepthMap, Grid, SemanticImage};

/// Per-column lateral factor `(u − c_x) / f_x`: lateral meters per meter of
/// depth.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionTable {
    tx: Vec<f64>,
}

impl ProjectionTable {
    pub fn new(fx: f64, cx: f64) -> Self {
        assert!(fx > 0.0, "focal length must be positive");
        ProjectionTable {
            tx: (0..SDC_SIZE).map(|u| (u as f64 - cx) / fx).collect(),
        }
    }

    #[inline]
    pub fn tx(&self, col: usize) -> f64 {
        self.tx[col]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.tx
    }
}

/// Per-pixel grid cell index; `None` marks a pixel outside the coverage.
pub type CellIndexMap = Grid<Option<u8>>;

const SCALE: f64 = (SDC_SIZE - 1) as f64;

#[inline]
fn to_cell(v: f64) -> Option<u8> {
    let r = round_half_up(v);
    (0.0..=SCALE).contains(&r).then_some(r as u8)
}

/// Grid column for a pixel at depth `d` with lateral factor `tx`.
#[inline]
pub fn px_of(d: f64, tx: f64) -> Option<u8> {
    to_cell((d * tx + COVERAGE / 2.0) / COVERAGE * SCALE)
}

/// Grid row for a pixel at depth `d`; the ego plane is the bottom row.
#[inline]
pub fn pz_of(d: f64) -> Option<u8> {
    if d > COVERAGE {
        return None;
    }
    to_cell((1.0 - d / COVERAGE) * SCALE)
}

pub fn compute_px(depth: &DepthMap, table: &ProjectionTable) -> CellIndexMap {
    let (w, h) = (depth.width(), depth.height());
    let mut out = Vec::with_capacity(w * h);
    for row in 0..h {
        out.extend(depth.row(row).iter().enumerate().map(|(col, &d)| px_of(d, table.tx(col))));
    }
    Grid::from_vec(w, h, out)
}

pub fn compute_pz(depth: &DepthMap) -> CellIndexMap {
    let data = depth.as_slice().iter().map(|&d| pz_of(d)).collect();
    Grid::from_vec(depth.width(), depth.height(), data)
}

/// Project labelled depth pixels into the occupancy grid. When several
/// pixels land in one cell the one highest in the image (smallest row, then
/// smallest column) wins; sky is never projected.
pub fn project_sdc(sem: &SemanticImage, depth: &DepthMap, table: &ProjectionTable) -> SdcTensor {
    assert_eq!(
        (sem.width(), sem.height()),
        (depth.width(), depth.height()),
        "semantic and depth images must be aligned"
    );
    assert_eq!(sem.width(), table.as_slice().len(), "projection table width");
    let mut sdc = SdcTensor::empty();
    // Row-major visitation with first-write-wins realises the min-(row, col)
    // tie rule.
    for row in 0..sem.height() {
        let labels = sem.row(row);
        let depths = depth.row(row);
        for col in 0..sem.width() {
            let class = labels[col];
            if class == classes::SKY {
                continue;
            }
            let d = depths[col];
            let (Some(z), Some(x)) = (pz_of(d), px_of(d, table.tx(col))) else {
                continue;
            };
            if sdc.label(z as usize, x as usize).is_none() {
                sdc.set(z as usize, x as usize, class);
            }
        }
    }
    sdc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sensor::CameraIntrinsics;

    #[test]
    fn column_examples() {
        assert_eq!(px_of(32.0, 0.0), Some(128));
        assert_eq!(px_of(64.0, 0.5), Some(255));
        assert_eq!(px_of(64.0, -1.0), None);
        assert_eq!(px_of(0.0, 0.3), Some(128));
    }

    #[test]
    fn row_examples() {
        assert_eq!(pz_of(0.0), Some(255));
        assert_eq!(pz_of(64.0), Some(0));
        assert_eq!(pz_of(70.0), None);
        assert_eq!(pz_of(64.0001), None);
    }

    #[test]
    fn table_antisymmetric_about_center() {
        let t = CameraIntrinsics::default().projection_table();
        for u in 0..128 {
            assert_eq!(t.tx(u), -t.tx(255 - u));
        }
        assert_eq!(t.tx(0), -127.5 / 128.0);
    }

    fn blank() -> (SemanticImage, DepthMap) {
        (Grid::new(256, 256, classes::SKY), Grid::new(256, 256, 1000.0))
    }

    #[test]
    fn sky_only_gives_empty_grid() {
        let (s, d) = blank();
        let t = CameraIntrinsics::default().projection_table();
        assert!(project_sdc(&s, &d, &t).is_empty());
    }

    #[test]
    fn single_road_pixel() {
        let (mut s, mut d) = blank();
        // center column pair straddles c_x; force tx = 0 with a custom table
        let t = ProjectionTable::new(128.0, 10.0);
        s.set(200, 10, classes::ROAD);
        d.set(200, 10, 32.0);
        let sdc = project_sdc(&s, &d, &t);
        assert_eq!(sdc.occupied_cells(), 1);
        assert_eq!(sdc.label(128, 128), Some(classes::ROAD));
        assert_eq!(sdc.get(7, 128, 128), 1);
    }

    #[test]
    fn higher_pixel_wins_ties() {
        let (mut s, mut d) = blank();
        let t = ProjectionTable::new(128.0, 10.0);
        s.set(200, 10, classes::ROAD);
        d.set(200, 10, 32.0);
        s.set(100, 10, classes::PEDESTRIAN);
        d.set(100, 10, 32.0);
        let sdc = project_sdc(&s, &d, &t);
        assert_eq!(sdc.label(128, 128), Some(classes::PEDESTRIAN));
    }

    #[test]
    fn index_maps_agree_with_projection() {
        let (_, mut d) = blank();
        d.set(3, 4, 10.0);
        let t = CameraIntrinsics::default().projection_table();
        let px = compute_px(&d, &t);
        let pz = compute_pz(&d);
        assert_eq!(px.get(3, 4), px_of(10.0, t.tx(4)));
        assert_eq!(pz.get(3, 4), Some(215));
        assert_eq!(pz.get(0, 0), None);
    }
}
