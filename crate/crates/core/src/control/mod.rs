//! Control stack: frame transform, waypoint network, the two agents and the
//! policy fusing them.

mod features;
mod network;
mod oracle;
mod pid;
mod policy;
mod transform;
mod types;

pub use features::{oracle_features, random_features, FeatureSource, POOL_BLOCKS};
pub use network::{
    mlp_agent, predict_waypoints, GruCell, Linear, NetworkDims, NetworkWeights, Tensor, WeightBundle, FEATURE_DIM, GRU_INPUT_DIM,
    HIDDEN_DIM, MLP_HIDDEN_DIM, NUM_WAYPOINTS,
};
pub use oracle::{local_route_point, oracle_waypoints, ORACLE_SPACINGS};
pub use pid::{aim_and_speed, Gains, Pid, PidAgent, PidGains};
pub use policy::{compute_beta, fuse_controls, ControlWeights, FusionBranch, LossWeights, PolicyVariant, THROTTLE_THRESHOLD};
pub use transform::{global_to_local, local_to_global};
pub use types::{LocalPoint, VehicularControls, WaypointDelta, Waypoints};
