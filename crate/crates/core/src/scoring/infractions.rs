use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::ledger::{InfractionKind, InfractionLedger};
use super::trace::TraceSample;
use crate::geom::{convex_overlap, point_in_polygon, segments_intersect, Vec2};
use crate::world::{ActorKind, LightState, Pose, World, STOP_SPEED};

/// Contact with the same object within this many seconds of the previous
/// contact continues the earlier collision instead of starting a new one.
pub const COLLISION_DEDUP_S: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Contact {
    Actor(usize),
    Obstacle(usize),
}

#[derive(Debug, Clone, Copy, Default)]
struct ZoneVisit {
    inside: bool,
    stopped: bool,
}

/// Incremental infraction detector; feed samples in time order.
#[derive(Debug, Clone)]
pub struct InfractionMonitor<'w> {
    world: &'w World,
    last_contact: BTreeMap<Contact, f64>,
    zones: Vec<ZoneVisit>,
    prev: Option<(Pose, Vec2)>,
    ledger: InfractionLedger,
}

fn ego_center(world: &World, pose: &Pose) -> Vec2 {
    pose.position() + pose.forward() * world.vehicle.body_offset()
}

impl<'w> InfractionMonitor<'w> {
    pub fn new(world: &'w World) -> Self {
        InfractionMonitor {
            world,
            last_contact: BTreeMap::new(),
            zones: vec![ZoneVisit::default(); world.map.stop_signs.len()],
            prev: None,
            ledger: InfractionLedger::default(),
        }
    }

    pub fn ledger(&self) -> &InfractionLedger {
        &self.ledger
    }

    pub fn into_ledger(self) -> InfractionLedger {
        self.ledger
    }

    fn contact(&mut self, key: Contact, kind: InfractionKind, t: f64, index: usize) {
        let fresh = self.last_contact.get(&key).is_none_or(|&last| t - last > COLLISION_DEDUP_S);
        if fresh {
            log::debug!("t={t:.2}: {} with #{index}", kind.as_str());
            self.ledger.push(kind, t, Some(index));
        }
        self.last_contact.insert(key, t);
    }

    pub fn observe(&mut self, s: &TraceSample) {
        let world = self.world;
        let map = &world.map;
        let footprint = world.vehicle.footprint(&s.pose);

        for a in &s.actors {
            if convex_overlap(&footprint, &a.footprint) {
                let kind = match a.kind {
                    ActorKind::Pedestrian => InfractionKind::CollisionPedestrian,
                    ActorKind::Vehicle | ActorKind::Bicyclist => InfractionKind::CollisionVehicle,
                };
                self.contact(Contact::Actor(a.id), kind, s.t, a.id);
            }
        }
        for (i, o) in map.obstacles.iter().enumerate() {
            if convex_overlap(&footprint, &o.footprint) {
                self.contact(Contact::Obstacle(i), InfractionKind::CollisionStatic, s.t, i);
            }
        }

        let rear = s.pose.position();
        let center = ego_center(world, &s.pose);
        if let Some((prev_pose, prev_center)) = self.prev {
            let prev_rear = prev_pose.position();
            let motion = rear - prev_rear;
            for (i, tl) in map.traffic_lights.iter().enumerate() {
                let red = s.lights.get(i) == Some(&LightState::Red);
                if red
                    && motion.dot(tl.direction) > 0.0
                    && segments_intersect(prev_rear, rear, tl.stop_line[0], tl.stop_line[1])
                    // half-open: a step starting on the line was counted on arrival
                    && (tl.stop_line[1] - tl.stop_line[0]).cross(prev_rear - tl.stop_line[0]) != 0.0
                {
                    log::debug!("t={:.2}: ran red light #{i}", s.t);
                    self.ledger.push(InfractionKind::RedLight, s.t, Some(i));
                }
            }
            if !map.is_on_road(center) {
                self.ledger.offroad_m += center.dist(prev_center);
            }
        }

        for (i, (sign, visit)) in map.stop_signs.iter().zip(self.zones.iter_mut()).enumerate() {
            let inside = point_in_polygon(rear, &sign.zone);
            if inside {
                if !visit.inside {
                    visit.stopped = false;
                }
                visit.stopped |= s.speed < STOP_SPEED;
            } else if visit.inside && !visit.stopped {
                log::debug!("t={:.2}: ignored stop sign #{i}", s.t);
                self.ledger.push(InfractionKind::StopSign, s.t, Some(i));
            }
            visit.inside = inside;
        }

        self.prev = Some((s.pose, center));
    }
}

/// Batch form of [`InfractionMonitor`].
pub fn detect_infractions(world: &World, trace: &[TraceSample]) -> InfractionLedger {
    let mut m = InfractionMonitor::new(world);
    trace.iter().for_each(|s| m.observe(s));
    m.into_ledger()
}
