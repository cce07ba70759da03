use super::transform::global_to_local;
use super::types::{LocalPoint, Waypoints};
use crate::world::{Pose, ReferencePath};

/// Default arc-length gaps ahead of the ego, meters.
pub const ORACLE_SPACINGS: [f64; 3] = [2.0, 4.0, 6.0];

/// Sample the reference path at `progress + spacing` for each spacing and
/// express the samples in the ego frame. Samples past the end of the path
/// continue along its final direction, so the implied speed holds up to the
/// goal; stopping there is the caller's decision.
pub fn oracle_waypoints(ego: &Pose, path: &ReferencePath, progress: f64, spacings: [f64; 3]) -> Waypoints {
    let len = path.length();
    let end = path.end();
    let tangent = path.polyline().tangent_at(len);
    Waypoints(spacings.map(|gap| {
        let s = progress + gap;
        let p = if s <= len { path.point_at(s) } else { end + tangent * (s - len) };
        global_to_local(p, ego)
    }))
}

/// Route point handed to the network: the next goal along the path, in the
/// ego frame.
pub fn local_route_point(ego: &Pose, path: &ReferencePath, progress: f64, min_ahead: f64) -> LocalPoint {
    global_to_local(path.route_target(progress, min_ahead), ego)
}
