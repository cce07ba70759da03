use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::classes;
use crate::geom::{oriented_rect, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActorKind {
    Pedestrian,
    Vehicle,
    Bicyclist,
}

impl ActorKind {
    /// Box size `(length, width, height)` in meters.
    pub fn dimensions(self) -> (f64, f64, f64) {
        match self {
            ActorKind::Pedestrian => (0.6, 0.6, 1.8),
            ActorKind::Vehicle => (4.5, 1.9, 1.5),
            ActorKind::Bicyclist => (1.8, 0.7, 1.7),
        }
    }

    pub fn class_id(self) -> u8 {
        match self {
            ActorKind::Pedestrian => classes::PEDESTRIAN,
            ActorKind::Vehicle | ActorKind::Bicyclist => classes::OTHER_VEHICLES,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Trigger {
    /// Fires at an absolute simulation time.
    Time { at: f64 },
    /// Fires once the ego rear axle is within `radius` of the anchor.
    Proximity { radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Behavior {
    Lawful,
    AdversarialCross,
    RunsDoubleGreen,
}

impl Behavior {
    pub fn is_adversarial(self) -> bool {
        !matches!(self, Behavior::Lawful)
    }
}

/// Path vertex reached `t` seconds after the script fires.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimedPoint {
    pub t: f64,
    pub position: Vec2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoubleGreenSpec {
    pub intersection: usize,
    pub duration_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NpcScript {
    pub kind: ActorKind,
    pub path: Vec<TimedPoint>,
    pub trigger: Trigger,
    #[serde(default = "default_behavior")]
    pub behavior: Behavior,
    /// Reference point for proximity triggers; the first path point when
    /// absent.
    #[serde(default)]
    pub anchor: Option<Vec2>,
    #[serde(default)]
    pub double_green: Option<DoubleGreenSpec>,
}

fn default_behavior() -> Behavior {
    Behavior::Lawful
}

impl NpcScript {
    pub fn anchor_point(&self) -> Vec2 {
        self.anchor.unwrap_or_else(|| self.path.first().map(|p| p.position).unwrap_or(Vec2::ZERO))
    }

    pub fn validate(&self) -> bool {
        let trigger_ok = match self.trigger {
            Trigger::Time { at } => at >= 0.0,
            Trigger::Proximity { radius } => radius > 0.0,
        };
        let times_ok = self.path.windows(2).all(|w| w[1].t > w[0].t);
        let dg_ok = match (self.behavior, self.double_green) {
            (Behavior::RunsDoubleGreen, Some(dg)) => dg.duration_s > 0.0,
            (Behavior::RunsDoubleGreen, None) => false,
            _ => true,
        };
        trigger_ok && self.path.len() >= 2 && times_ok && dg_ok
    }

    /// Position and unit heading `elapsed` seconds after firing.
    pub fn sample(&self, elapsed: f64) -> (Vec2, Vec2) {
        let path = &self.path;
        let last = path.len() - 1;
        if elapsed <= path[0].t {
            return (path[0].position, (path[1].position - path[0].position).normalized());
        }
        for i in 0..last {
            let (a, b) = (path[i], path[i + 1]);
            if elapsed < b.t {
                let u = (elapsed - a.t) / (b.t - a.t);
                let dir = (b.position - a.position).normalized();
                return (a.position + (b.position - a.position) * u, dir);
            }
        }
        (path[last].position, (path[last].position - path[last - 1].position).normalized())
    }
}

/// Runtime state of one scripted actor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActorState {
    pub kind: ActorKind,
    pub active: bool,
    pub fired_at: Option<f64>,
    pub position: Vec2,
    pub heading: Vec2,
}

impl ActorState {
    pub fn footprint(&self) -> [Vec2; 4] {
        let (l, w, _) = self.kind.dimensions();
        let dir = if self.heading.norm() > 0.0 { self.heading } else { Vec2::new(1.0, 0.0) };
        oriented_rect(self.position, dir, l, w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn sample_interpolates() {
        let s = NpcScript {
            kind: ActorKind::Pedestrian,
            path: vec![
                TimedPoint { t: 0.0, position: Vec2::new(0.0, 0.0) },
                TimedPoint { t: 2.0, position: Vec2::new(4.0, 0.0) },
            ],
            trigger: Trigger::Proximity { radius: 15.0 },
            behavior: Behavior::AdversarialCross,
            anchor: None,
            double_green: None,
        };
        assert!(s.validate());
        assert_eq!(s.sample(1.0).0, Vec2::new(2.0, 0.0));
        assert_eq!(s.sample(5.0).0, Vec2::new(4.0, 0.0));
        assert_eq!(s.sample(1.0).1, Vec2::new(1.0, 0.0));
    }

    #[test]
    fn invalid_scripts() {
        let mut s = NpcScript {
            kind: ActorKind::Vehicle,
            path: vec![TimedPoint { t: 0.0, position: Vec2::ZERO }],
            trigger: Trigger::Proximity { radius: 0.0 },
            behavior: Behavior::Lawful,
            anchor: None,
            double_green: None,
        };
        assert!(!s.validate());
        s.path.push(TimedPoint { t: 1.0, position: Vec2::new(1.0, 0.0) });
        assert!(!s.validate());
        s.trigger = Trigger::Proximity { radius: 3.0 };
        assert!(s.validate());
        s.behavior = Behavior::RunsDoubleGreen;
        assert!(!s.validate());
    }
}
