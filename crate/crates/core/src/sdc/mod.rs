//! Semantic depth cloud: the bird's-eye-view occupancy grid built by
//! projecting labelled depth pixels onto the ground plane.

mod markers;
mod projection;
mod tensor;

pub use markers::{draw_ego_marker, local_to_cell, rasterize_markers, RgbImage, EGO_MARKER_COLOR, ROUTE_COLOR, WAYPOINT_COLOR};
pub use projection::{compute_px, compute_pz, project_sdc, px_of, pz_of, CellIndexMap, ProjectionTable};
pub use tensor::{SdcTensor, COVERAGE, EGO_COL, EGO_ROW, METERS_PER_CELL, SDC_CHANNELS, SDC_SIZE};
