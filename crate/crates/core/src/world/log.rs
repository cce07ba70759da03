use serde::{Deserialize, Serialize};

use super::state::WorldState;
use super::vehicle::Pose;
use crate::control::{LocalPoint, VehicularControls, Waypoints};
use crate::sensor::{DepthMap, SemanticImage};

/// Everything the pipeline produced at a log boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutputs {
    pub depth: DepthMap,
    pub semantic_gt: SemanticImage,
    /// Semantic image as perceived by the agent (weather-corrupted).
    pub semantic_pred: SemanticImage,
    pub route_point: LocalPoint,
    pub expert_controls: VehicularControls,
    pub agent_controls: VehicularControls,
    pub expert_waypoints: Waypoints,
    pub agent_waypoints: Waypoints,
    pub tl_gt: bool,
    pub ss_gt: bool,
    pub tl_pred: f64,
    pub ss_pred: f64,
}

/// Scalar part of a drive-log frame; images travel alongside it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameRecord {
    pub index: u64,
    pub t: f64,
    pub pose: Pose,
    pub speed: f64,
    pub route_point: LocalPoint,
    pub expert_controls: VehicularControls,
    pub agent_controls: VehicularControls,
    pub expert_waypoints: Waypoints,
    pub agent_waypoints: Waypoints,
    pub tl_gt: bool,
    pub ss_gt: bool,
    pub tl_pred: f64,
    pub ss_pred: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriveLogFrame {
    pub record: FrameRecord,
    pub depth: DepthMap,
    pub semantic_gt: SemanticImage,
    pub semantic_pred: SemanticImage,
}

/// Assemble frame `index` of a log with period `period`. Timestamps are
/// `index · period`, so the first frame is at 0.
pub fn record_log(state: &WorldState, outputs: PipelineOutputs, index: u64, period: f64) -> DriveLogFrame {
    DriveLogFrame {
        record: FrameRecord {
            index,
            t: index as f64 * period,
            pose: state.ego.pose,
            speed: state.ego.speed,
            route_point: outputs.route_point,
            expert_controls: outputs.expert_controls,
            agent_controls: outputs.agent_controls,
            expert_waypoints: outputs.expert_waypoints,
            agent_waypoints: outputs.agent_waypoints,
            tl_gt: outputs.tl_gt,
            ss_gt: outputs.ss_gt,
            tl_pred: outputs.tl_pred,
            ss_pred: outputs.ss_pred,
        },
        depth: outputs.depth,
        semantic_gt: outputs.semantic_gt,
        semantic_pred: outputs.semantic_pred,
    }
}
