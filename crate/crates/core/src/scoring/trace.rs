use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::geom::Vec2;
use crate::world::{ActorKind, LightState, Pose, World, WorldState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActorSnapshot {
    pub id: usize,
    pub kind: ActorKind,
    pub footprint: [Vec2; 4],
}

/// Everything scoring needs from one simulation step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    pub t: f64,
    pub pose: Pose,
    pub speed: f64,
    /// Active actors only.
    pub actors: Vec<ActorSnapshot>,
    /// State of every traffic light, in map order.
    pub lights: Vec<LightState>,
}

impl TraceSample {
    pub fn capture(world: &World, state: &WorldState) -> Self {
        TraceSample {
            t: state.time,
            pose: state.ego.pose,
            speed: state.ego.speed,
            actors: state
                .active_actors()
                .map(|(id, a)| ActorSnapshot {
                    id,
                    kind: a.kind,
                    footprint: a.footprint(),
                })
                .collect(),
            lights: state.light_states(world),
        }
    }

    /// Sample of an ego alone in the world, for constructed traces.
    pub fn ego_only(t: f64, pose: Pose, speed: f64, lights: Vec<LightState>) -> Self {
        TraceSample {
            t,
            pose,
            speed,
            actors: Vec::new(),
            lights,
        }
    }
}
