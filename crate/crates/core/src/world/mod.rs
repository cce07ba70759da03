//! Deterministic 2.5D world: map, ego kinematics, scripted actors, traffic
//! control, and the privileged expert autopilot.

mod actors;
mod expert;
mod lights;
mod log;
mod map;
mod route;
mod scenario;
mod state;
mod vehicle;

pub use actors::{ActorKind, ActorState, Behavior, DoubleGreenSpec, NpcScript, TimedPoint, Trigger};
pub use expert::{
    expert_autopilot, expert_decide, red_light_bit, stop_line_distance, stop_sign_bit, ExpertDecision, ExpertParams, Hazard,
};
pub use lights::{LightOverride, LightState};
pub use log::{record_log, DriveLogFrame, FrameRecord, PipelineOutputs};
pub use map::{Intersection, StaticObstacle, StopSign, TrafficLight, WorldMap};
pub use route::{ReferencePath, RouteSpec, RouteTracker};
pub use scenario::{ScenarioConfig, ScenarioKind};
pub use state::{step_world, trigger_adversarial_event, StopZoneStatus, World, WorldState, STOP_SPEED};
pub use vehicle::{EgoState, Pose, VehicleParams};
