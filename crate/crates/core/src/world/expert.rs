use serde::{Deserialize, Serialize};

use super::lights::LightState;
use super::route::{ReferencePath, RouteSpec};
use super::state::{World, WorldState};
use crate::control::{global_to_local, VehicularControls};
use crate::geom::{convex_overlap, oriented_rect, point_in_polygon, Vec2};
use crate::math::{self, clamp};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExpertParams {
    pub cruise_speed: f64,
    /// Throttle per m/s of speed error.
    pub speed_gain: f64,
    pub lookahead_min: f64,
    /// Extra lookahead per m/s.
    pub lookahead_gain: f64,
    /// Length of the safety envelope ahead of the front bumper; its width is
    /// the map lane width.
    pub envelope_length: f64,
    /// Range for the traffic-light / stop-sign supervision bits.
    pub sensing_range: f64,
    /// Gap kept to a red stop line.
    pub stop_margin: f64,
    /// Deceleration used to decide when to start braking for a red light.
    pub planning_decel: f64,
}

impl Default for ExpertParams {
    fn default() -> Self {
        ExpertParams {
            cruise_speed: 6.0,
            speed_gain: 1.0,
            lookahead_min: 4.0,
            lookahead_gain: 0.5,
            envelope_length: 12.0,
            sensing_range: 20.0,
            stop_margin: 2.0,
            planning_decel: 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hazard {
    None,
    RedLight,
    StopSign,
    Actor,
    RouteEnd,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpertDecision {
    pub controls: VehicularControls,
    pub hazard: Hazard,
}

impl ExpertDecision {
    pub fn stopping(&self) -> bool {
        self.hazard != Hazard::None
    }
}

/// Distance from the ego front bumper to the stop line of `light` along the
/// ego's forward axis, if the light controls the ego's approach and the rear
/// axle has not crossed the line yet. Negative when the bumper is already
/// past the line.
pub fn stop_line_distance(world: &World, state: &WorldState, light: usize) -> Option<f64> {
    let tl = &world.map.traffic_lights[light];
    let pose = &state.ego.pose;
    let f = pose.forward();
    let dir = tl.direction.normalized();
    if f.dot(dir) < 0.5 {
        return None;
    }
    let [a, b] = tl.stop_line;
    let mut n = (b - a).perp().normalized();
    if n.dot(dir) < 0.0 {
        n = -n;
    }
    let rear = pose.position();
    let rear_offset = (rear - a).dot(n);
    if rear_offset >= 0.0 {
        return None;
    }
    let along = -rear_offset / f.dot(n);
    let hit = rear + f * along;
    let seg = b - a;
    let u = (hit - a).dot(seg) / seg.dot(seg);
    let slack = 0.5 / seg.norm();
    if u < -slack || u > 1.0 + slack {
        return None;
    }
    Some(along - world.vehicle.front_offset())
}

/// Traffic-light supervision bit: a red light facing the ego within range.
pub fn red_light_bit(world: &World, state: &WorldState, range: f64) -> bool {
    (0..world.map.traffic_lights.len()).any(|i| {
        state.light_state(world, i) == LightState::Red
            && stop_line_distance(world, state, i).is_some_and(|d| d <= range)
    })
}

/// Stop-sign supervision bit: the ego is inside a stop zone or one lies
/// ahead of it within range.
pub fn stop_sign_bit(world: &World, state: &WorldState, range: f64) -> bool {
    let pose = &state.ego.pose;
    world.map.stop_signs.iter().any(|sign| {
        if point_in_polygon(pose.position(), &sign.zone) {
            return true;
        }
        let n = sign.zone.len() as f64;
        let centroid = sign.zone.iter().fold(Vec2::ZERO, |acc, p| acc + *p) * (1.0 / n);
        let l = global_to_local(centroid, pose);
        l.y > 0.0 && l.y <= range && libm::fabs(l.x) <= world.map.lane_width
    })
}

fn envelope_blocked(world: &World, state: &WorldState, params: &ExpertParams) -> bool {
    let pose = &state.ego.pose;
    let f = pose.forward();
    let center = pose.position() + f * (world.vehicle.front_offset() + 0.5 * params.envelope_length);
    let envelope = oriented_rect(center, f, params.envelope_length, world.map.lane_width);
    state
        .active_actors()
        .any(|(_, a)| convex_overlap(&envelope, &a.footprint()))
}

fn must_stop_for_light(world: &World, state: &WorldState, params: &ExpertParams) -> bool {
    let v = state.ego.speed;
    let trigger = v * v / (2.0 * params.planning_decel) + params.stop_margin;
    (0..world.map.traffic_lights.len()).any(|i| {
        let Some(d) = stop_line_distance(world, state, i) else {
            return false;
        };
        match state.light_state(world, i) {
            LightState::Green => false,
            LightState::Red => d <= trigger,
            LightState::Yellow => {
                let can_stop = d >= v * v / (2.0 * world.vehicle.brake_decel) + 0.5;
                can_stop && d <= trigger
            }
        }
    })
}

fn must_stop_for_sign(world: &World, state: &WorldState) -> bool {
    world
        .map
        .stop_signs
        .iter()
        .zip(&state.stop_zones)
        .any(|(_, z)| z.inside && !z.satisfied)
}

/// Expert decision given the ego's arc position `s` on the reference path.
pub fn expert_decide(
    world: &World,
    state: &WorldState,
    path: &ReferencePath,
    s: f64,
    params: &ExpertParams,
) -> ExpertDecision {
    let stop = |hazard| ExpertDecision {
        controls: VehicularControls::FULL_STOP,
        hazard,
    };
    if s >= path.length() - 1.0 {
        return stop(Hazard::RouteEnd);
    }
    if must_stop_for_light(world, state, params) {
        return stop(Hazard::RedLight);
    }
    if must_stop_for_sign(world, state) {
        return stop(Hazard::StopSign);
    }
    if envelope_blocked(world, state, params) {
        return stop(Hazard::Actor);
    }

    let pose = &state.ego.pose;
    let v = state.ego.speed;
    let lookahead = params.lookahead_min.max(params.lookahead_gain * v);
    let target = path.point_at(s + lookahead);
    let local = global_to_local(target, pose);
    let dist = math::sqrt(local.x * local.x + local.y * local.y).max(1e-6);
    let alpha = math::atan2(local.x, local.y);
    let wheel = math::atan(2.0 * world.vehicle.wheelbase * libm::sin(alpha) / dist);
    let steering = clamp(math::to_degrees(wheel) / world.vehicle.max_steer_deg, -1.0, 1.0);
    let throttle = clamp(params.speed_gain * (params.cruise_speed - v), 0.0, VehicularControls::MAX_THROTTLE);
    ExpertDecision {
        controls: VehicularControls {
            steering,
            throttle,
            brake: 0.0,
        },
        hazard: Hazard::None,
    }
}

/// Privileged expert: lane-center pure pursuit toward the dense reference
/// path, full brake for red lights, unserved stop signs, actors inside the
/// safety envelope, and at the end of the route.
pub fn expert_autopilot(world: &World, state: &WorldState, route: &RouteSpec, params: &ExpertParams) -> VehicularControls {
    let path = route.reference_path();
    let s = path.project(state.ego.pose.position()).s;
    expert_decide(world, state, &path, s, params).controls
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes;
    use crate::world::actors::{ActorKind, Behavior, NpcScript, TimedPoint, Trigger};
    use crate::world::map::{Intersection, StopSign, TrafficLight, WorldMap};
    use crate::world::state::step_world;
    use crate::world::{Pose, VehicleParams};
    use alloc::vec;
    use alloc::vec::Vec;

    fn map() -> WorldMap {
        WorldMap {
            name: "t".into(),
            roads: vec![vec![
                Vec2::new(-4.0, -10.0),
                Vec2::new(4.0, -10.0),
                Vec2::new(4.0, 400.0),
                Vec2::new(-4.0, 400.0),
            ]],
            lanes: vec![],
            sidewalks: vec![],
            markings: vec![],
            marking_width: 0.15,
            obstacles: vec![],
            intersections: vec![Intersection { green_s: 10.0, yellow_s: 3.0, all_red_s: 1.0, offset_s: 14.0 }],
            traffic_lights: vec![TrafficLight {
                position: Vec2::new(5.0, 50.0),
                stop_line: [Vec2::new(-4.0, 50.0), Vec2::new(4.0, 50.0)],
                direction: Vec2::new(0.0, 1.0),
                intersection: 0,
                phase: 0,
            }],
            stop_signs: vec![],
            ground_class: classes::TERRAIN,
            lane_width: 3.5,
        }
    }

    fn route() -> RouteSpec {
        RouteSpec::new("r", vec![Vec2::ZERO, Vec2::new(0.0, 300.0)])
    }

    #[test]
    fn stopped_at_red_line_brakes() {
        // offset 14 s puts phase 0 in red at t = 0
        let w = World::new(map(), vec![], VehicleParams::default()).unwrap();
        let front = w.vehicle.front_offset();
        let pose = Pose::facing(Vec2::new(0.0, 49.0 - front), Vec2::new(0.0, 1.0));
        let s = w.initial_state(pose, false);
        assert_eq!(s.light_state(&w, 0), LightState::Red);
        let c = expert_autopilot(&w, &s, &route(), &ExpertParams::default());
        assert_eq!(c, VehicularControls { steering: 0.0, throttle: 0.0, brake: 1.0 });
        assert!(red_light_bit(&w, &s, 20.0));
    }

    #[test]
    fn straight_road_tracking() {
        let mut m = map();
        m.traffic_lights.clear();
        let w = World::new(m, vec![], VehicleParams::default()).unwrap();
        let r = route();
        let mut s = w.initial_state(Pose::facing(Vec2::new(0.3, 0.0), Vec2::new(0.0, 1.0)), false);
        let params = ExpertParams::default();
        let mut max_offset: f64 = 0.0;
        while s.ego.pose.y < 290.0 {
            let c = expert_autopilot(&w, &s, &r, &params);
            s = step_world(&w, &s, c, 0.05);
            max_offset = max_offset.max(libm::fabs(s.ego.pose.x));
            assert!(s.time < 200.0);
        }
        assert!(max_offset < 0.5, "{max_offset}");
    }

    #[test]
    fn pedestrian_in_envelope_brakes_immediately() {
        let mut m = map();
        m.traffic_lights.clear();
        let script = NpcScript {
            kind: ActorKind::Pedestrian,
            path: vec![
                TimedPoint { t: 0.0, position: Vec2::new(0.5, 14.0) },
                TimedPoint { t: 5.0, position: Vec2::new(-6.0, 14.0) },
            ],
            trigger: Trigger::Proximity { radius: 15.0 },
            behavior: Behavior::AdversarialCross,
            anchor: None,
            double_green: None,
        };
        let w = World::new(m, vec![script], VehicleParams::default()).unwrap();
        let r = route();
        let mut s = w.initial_state(Pose::facing(Vec2::new(0.0, -10.0), Vec2::new(0.0, 1.0)), true);
        s.ego.speed = 5.0;
        let params = ExpertParams::default();
        let mut history: Vec<(bool, f64)> = Vec::new();
        for _ in 0..40 {
            let c = expert_autopilot(&w, &s, &r, &params);
            history.push((s.actors[0].active, c.brake));
            s = step_world(&w, &s, c, 0.05);
        }
        let first_active = history.iter().position(|(a, _)| *a).unwrap();
        assert_eq!(history[first_active].1, 1.0);
    }

    #[test]
    fn stop_sign_served_then_released() {
        let mut m = map();
        m.traffic_lights.clear();
        m.stop_signs.push(StopSign {
            position: Vec2::new(5.0, 40.0),
            zone: vec![
                Vec2::new(-2.0, 32.0),
                Vec2::new(2.0, 32.0),
                Vec2::new(2.0, 40.0),
                Vec2::new(-2.0, 40.0),
            ],
        });
        let w = World::new(m, vec![], VehicleParams::default()).unwrap();
        let r = route();
        let mut s = w.initial_state(Pose::facing(Vec2::ZERO, Vec2::new(0.0, 1.0)), false);
        let params = ExpertParams::default();
        let mut stopped_inside = false;
        while s.ego.pose.y < 60.0 {
            let c = expert_autopilot(&w, &s, &r, &params);
            s = step_world(&w, &s, c, 0.05);
            if s.stop_zones[0].inside && s.ego.speed < 0.1 {
                stopped_inside = true;
            }
            assert!(s.time < 60.0);
        }
        assert!(stopped_inside);
    }
}
