use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::actors::{ActorState, NpcScript, Trigger};
use super::lights::{scheduled_state, LightOverride, LightState};
use super::map::WorldMap;
use super::vehicle::{advance_ego, EgoState, Pose, VehicleParams};
use crate::control::VehicularControls;
use crate::geom::point_in_polygon;
use crate::{Error, Result};

/// Immutable part of a simulation: map, actor scripts, ego vehicle model.
#[derive(Debug, Clone, PartialEq)]
pub struct World {
    pub map: WorldMap,
    pub scripts: Vec<NpcScript>,
    pub vehicle: VehicleParams,
}

/// Stop-sign bookkeeping for the ego.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StopZoneStatus {
    pub inside: bool,
    /// The ego came to a stop during the current visit.
    pub satisfied: bool,
}

/// Dynamic part of a simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldState {
    pub time: f64,
    pub step: u64,
    pub ego: EgoState,
    pub actors: Vec<ActorState>,
    pub overrides: Vec<LightOverride>,
    pub stop_zones: Vec<StopZoneStatus>,
    /// Whether adversarial scripts may fire.
    pub adversarial: bool,
    /// Number of control components clamped to their legal range so far.
    pub clamp_events: u32,
}

/// Speed below which the ego counts as stopped at a stop sign.
pub const STOP_SPEED: f64 = 0.1;

impl World {
    pub fn new(map: WorldMap, scripts: Vec<NpcScript>, vehicle: VehicleParams) -> Result<Self> {
        map.validate()?;
        for (i, s) in scripts.iter().enumerate() {
            if !s.validate() {
                return Err(Error::InvalidConfig(format!("actor script {i} is invalid")));
            }
            if let Some(dg) = s.double_green {
                if dg.intersection >= map.intersections.len() {
                    return Err(Error::InvalidConfig(format!(
                        "actor script {i} references missing intersection {}",
                        dg.intersection
                    )));
                }
            }
        }
        if !vehicle.wheelbase.is_finite() || vehicle.wheelbase <= 0.0 {
            return Err(Error::InvalidConfig("wheelbase must be positive".into()));
        }
        Ok(World { map, scripts, vehicle })
    }

    pub fn initial_state(&self, start: Pose, adversarial: bool) -> WorldState {
        let actors = self
            .scripts
            .iter()
            .map(|s| {
                let (position, heading) = s.sample(0.0);
                ActorState {
                    kind: s.kind,
                    active: false,
                    fired_at: None,
                    position,
                    heading,
                }
            })
            .collect();
        let mut state = WorldState {
            time: 0.0,
            step: 0,
            ego: EgoState {
                pose: start,
                speed: 0.0,
                controls: VehicularControls::default(),
            },
            actors,
            overrides: Vec::new(),
            stop_zones: alloc::vec![StopZoneStatus::default(); self.map.stop_signs.len()],
            adversarial,
            clamp_events: 0,
        };
        update_stop_zones(self, &mut state);
        fire_due_scripts(self, &mut state);
        state
    }
}

impl WorldState {
    pub fn light_state(&self, world: &World, light: usize) -> LightState {
        let tl = &world.map.traffic_lights[light];
        if self
            .overrides
            .iter()
            .any(|o| o.intersection == tl.intersection && o.active(self.time))
        {
            return LightState::Green;
        }
        scheduled_state(&world.map.intersections[tl.intersection], tl.phase, self.time)
    }

    pub fn light_states(&self, world: &World) -> Vec<LightState> {
        (0..world.map.traffic_lights.len()).map(|i| self.light_state(world, i)).collect()
    }

    pub fn active_actors(&self) -> impl Iterator<Item = (usize, &ActorState)> {
        self.actors.iter().enumerate().filter(|(_, a)| a.active)
    }
}

/// Activate script `index`. Re-triggering a consumed event is a no-op.
pub fn trigger_adversarial_event(world: &World, state: &WorldState, index: usize) -> WorldState {
    let mut next = state.clone();
    fire(world, &mut next, index);
    next
}

fn fire(world: &World, state: &mut WorldState, index: usize) {
    let Some(actor) = state.actors.get_mut(index) else {
        return;
    };
    if actor.fired_at.is_some() {
        return;
    }
    let script = &world.scripts[index];
    actor.fired_at = Some(state.time);
    actor.active = true;
    let (p, h) = script.sample(0.0);
    actor.position = p;
    actor.heading = h;
    if let Some(dg) = script.double_green {
        state.overrides.push(LightOverride {
            intersection: dg.intersection,
            start: state.time,
            end: state.time + dg.duration_s,
        });
    }
    log::debug!("t={:.2}: actor script {index} fired", state.time);
}

fn fire_due_scripts(world: &World, state: &mut WorldState) {
    let ego = state.ego.pose.position();
    for (i, script) in world.scripts.iter().enumerate() {
        if state.actors[i].fired_at.is_some() {
            continue;
        }
        if script.behavior.is_adversarial() && !state.adversarial {
            continue;
        }
        let due = match script.trigger {
            Trigger::Time { at } => state.time >= at,
            Trigger::Proximity { radius } => ego.dist(script.anchor_point()) <= radius,
        };
        if due {
            fire(world, state, i);
        }
    }
}

fn update_stop_zones(world: &World, state: &mut WorldState) {
    let p = state.ego.pose.position();
    for (sign, status) in world.map.stop_signs.iter().zip(state.stop_zones.iter_mut()) {
        let inside = point_in_polygon(p, &sign.zone);
        if inside {
            if !status.inside {
                status.satisfied = false;
            }
            if state.ego.speed < STOP_SPEED {
                status.satisfied = true;
            }
        } else {
            status.satisfied = false;
        }
        status.inside = inside;
    }
}

/// Advance the world by `dt` seconds under `controls`. Out-of-range controls
/// are clamped (and counted in [`WorldState::clamp_events`]).
pub fn step_world(world: &World, state: &WorldState, controls: VehicularControls, dt: f64) -> WorldState {
    let (legal, clamped) = controls.clamped();
    let mut next = state.clone();
    if clamped > 0 {
        next.clamp_events += clamped;
        log::trace!("t={:.2}: clamped {clamped} control component(s)", state.time);
    }
    next.ego = advance_ego(&state.ego, legal, &world.vehicle, dt);
    next.time = state.time + dt;
    next.step = state.step + 1;
    update_stop_zones(world, &mut next);
    fire_due_scripts(world, &mut next);
    for (i, actor) in next.actors.iter_mut().enumerate() {
        if let (true, Some(t0)) = (actor.active, actor.fired_at) {
            let (p, h) = world.scripts[i].sample(next.time - t0);
            actor.position = p;
            actor.heading = h;
        }
    }
    next
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes;
    use crate::geom::Vec2;
    use crate::world::actors::{ActorKind, Behavior, DoubleGreenSpec, TimedPoint};
    use crate::world::map::{Intersection, TrafficLight};
    use alloc::vec;

    fn straight_world(scripts: Vec<NpcScript>) -> World {
        let map = WorldMap {
            name: "straight".into(),
            roads: vec![vec![
                Vec2::new(-4.0, -10.0),
                Vec2::new(4.0, -10.0),
                Vec2::new(4.0, 500.0),
                Vec2::new(-4.0, 500.0),
            ]],
            lanes: vec![vec![Vec2::new(0.0, 0.0), Vec2::new(0.0, 490.0)]],
            sidewalks: vec![],
            markings: vec![],
            marking_width: 0.15,
            obstacles: vec![],
            intersections: vec![Intersection { green_s: 10.0, yellow_s: 3.0, all_red_s: 1.0, offset_s: 0.0 }],
            traffic_lights: vec![
                TrafficLight {
                    position: Vec2::new(5.0, 100.0),
                    stop_line: [Vec2::new(-4.0, 100.0), Vec2::new(4.0, 100.0)],
                    direction: Vec2::new(0.0, 1.0),
                    intersection: 0,
                    phase: 0,
                },
                TrafficLight {
                    position: Vec2::new(5.0, 110.0),
                    stop_line: [Vec2::new(4.0, 104.0), Vec2::new(12.0, 104.0)],
                    direction: Vec2::new(-1.0, 0.0),
                    intersection: 0,
                    phase: 1,
                },
            ],
            stop_signs: vec![],
            ground_class: classes::TERRAIN,
            lane_width: 3.5,
        };
        World::new(map, scripts, VehicleParams::default()).unwrap()
    }

    fn start() -> Pose {
        Pose::facing(Vec2::ZERO, Vec2::new(0.0, 1.0))
    }

    #[test]
    fn no_motion_without_speed() {
        let w = straight_world(vec![]);
        let s0 = w.initial_state(start(), false);
        for steer in [-1.0, -0.3, 0.0, 0.7, 1.0] {
            let c = VehicularControls { steering: steer, throttle: 0.0, brake: 0.0 };
            let s1 = step_world(&w, &s0, c, 0.05);
            assert_eq!(s1.ego.pose, s0.ego.pose);
        }
    }

    #[test]
    fn zero_steering_keeps_heading() {
        let w = straight_world(vec![]);
        let mut s = w.initial_state(start(), false);
        let c = VehicularControls { steering: 0.0, throttle: 0.75, brake: 0.0 };
        for _ in 0..100 {
            s = step_world(&w, &s, c, 0.05);
        }
        assert_eq!(s.ego.pose.heading, start().heading);
        assert!(libm::fabs(s.ego.pose.x) < 1e-9);
        assert!(s.ego.pose.y > 10.0);
    }

    #[test]
    fn clamping_is_counted() {
        let w = straight_world(vec![]);
        let s0 = w.initial_state(start(), false);
        let c = VehicularControls { steering: 2.0, throttle: 0.9, brake: -1.0 };
        let s1 = step_world(&w, &s0, c, 0.05);
        assert_eq!(s1.clamp_events, 3);
        assert_eq!(s1.ego.controls, VehicularControls { steering: 1.0, throttle: 0.75, brake: 0.0 });
    }

    fn pedestrian(trigger: Trigger, behavior: Behavior) -> NpcScript {
        NpcScript {
            kind: ActorKind::Pedestrian,
            path: vec![
                TimedPoint { t: 0.0, position: Vec2::new(6.0, 20.0) },
                TimedPoint { t: 8.0, position: Vec2::new(-6.0, 20.0) },
            ],
            trigger,
            behavior,
            anchor: None,
            double_green: None,
        }
    }

    #[test]
    fn proximity_trigger_predicate() {
        let w = straight_world(vec![pedestrian(Trigger::Proximity { radius: 15.0 }, Behavior::AdversarialCross)]);
        // ego 20 m from the anchor: not fired
        let s = w.initial_state(Pose::facing(Vec2::new(6.0, 0.0), Vec2::new(0.0, 1.0)), true);
        assert!(!s.actors[0].active);
        let s = w.initial_state(Pose::facing(Vec2::new(6.0, 6.0), Vec2::new(0.0, 1.0)), true);
        assert!(s.actors[0].active);
    }

    #[test]
    fn normal_scenarios_never_fire_adversarial_scripts() {
        let w = straight_world(vec![pedestrian(Trigger::Time { at: 0.5 }, Behavior::AdversarialCross)]);
        let mut s = w.initial_state(start(), false);
        for _ in 0..200 {
            s = step_world(&w, &s, VehicularControls::default(), 0.05);
        }
        assert!(s.actors[0].fired_at.is_none());
    }

    #[test]
    fn events_fire_at_most_once() {
        let w = straight_world(vec![pedestrian(Trigger::Time { at: 0.5 }, Behavior::AdversarialCross)]);
        let mut s = w.initial_state(start(), true);
        for _ in 0..20 {
            s = step_world(&w, &s, VehicularControls::default(), 0.05);
        }
        let fired = s.actors[0].fired_at.unwrap();
        let again = trigger_adversarial_event(&w, &s, 0);
        assert_eq!(again.actors[0].fired_at, Some(fired));
        assert_eq!(again, s);
    }

    #[test]
    fn double_green_window() {
        let mut script = pedestrian(Trigger::Time { at: 2.0 }, Behavior::RunsDoubleGreen);
        script.kind = ActorKind::Vehicle;
        script.double_green = Some(DoubleGreenSpec { intersection: 0, duration_s: 5.0 });
        let w = straight_world(vec![script]);
        let mut s = w.initial_state(start(), true);
        let mut both_green = 0;
        let mut steps = 0;
        while s.time < 30.0 {
            s = step_world(&w, &s, VehicularControls::default(), 0.05);
            steps += 1;
            let st = s.light_states(&w);
            let window = s.actors[0].fired_at.is_some_and(|t0| s.time >= t0 && s.time < t0 + 5.0);
            if st[0] == LightState::Green && st[1] == LightState::Green {
                both_green += 1;
                assert!(window, "double green outside window at t={}", s.time);
            } else {
                assert!(!window, "window without double green at t={}", s.time);
            }
        }
        assert!(steps > 0);
        assert!((s.actors[0].fired_at.unwrap() - 2.0).abs() < 1e-9);
        assert!((99..=101).contains(&both_green), "{both_green}");
    }
}
