use serde::{Deserialize, Serialize};

use crate::math::clamp;

/// Denormalized vehicle controls.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct VehicularControls {
    /// `[-1, 1]`, positive steers right.
    pub steering: f64,
    /// `[0, 0.75]`.
    pub throttle: f64,
    /// `[0, 1]`.
    pub brake: f64,
}

impl VehicularControls {
    pub const MAX_THROTTLE: f64 = 0.75;

    pub const FULL_STOP: VehicularControls = VehicularControls {
        steering: 0.0,
        throttle: 0.0,
        brake: 1.0,
    };

    /// Clamp into the legal ranges; NaN components become 0. Returns the
    /// number of components that changed.
    pub fn clamped(self) -> (VehicularControls, u32) {
        let mut changed = 0;
        let mut fix = |v: f64, lo: f64, hi: f64| {
            let out = if v.is_nan() { 0.0 } else { clamp(v, lo, hi) };
            if out != v {
                changed += 1;
            }
            out
        };
        let c = VehicularControls {
            steering: fix(self.steering, -1.0, 1.0),
            throttle: fix(self.throttle, 0.0, Self::MAX_THROTTLE),
            brake: fix(self.brake, 0.0, 1.0),
        };
        (c, changed)
    }

    pub fn is_legal(&self) -> bool {
        (-1.0..=1.0).contains(&self.steering)
            && (0.0..=Self::MAX_THROTTLE).contains(&self.throttle)
            && (0.0..=1.0).contains(&self.brake)
    }
}

/// Point in the ego bird's-eye-view frame: `x` to the right, `y` forward,
/// origin at the ego rear axle.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct LocalPoint {
    pub x: f64,
    pub y: f64,
}

impl LocalPoint {
    pub const ORIGIN: LocalPoint = LocalPoint { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        LocalPoint { x, y }
    }

    pub fn dist(self, o: LocalPoint) -> f64 {
        crate::math::sqrt((self.x - o.x) * (self.x - o.x) + (self.y - o.y) * (self.y - o.y))
    }
}

impl From<[f64; 2]> for LocalPoint {
    fn from(a: [f64; 2]) -> Self {
        LocalPoint::new(a[0], a[1])
    }
}

impl From<LocalPoint> for [f64; 2] {
    fn from(p: LocalPoint) -> Self {
        [p.x, p.y]
    }
}

/// Per-step waypoint offset predicted by the network head.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WaypointDelta {
    pub dx: f64,
    pub dy: f64,
}

/// The three predicted waypoints in the local frame.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Waypoints(pub [LocalPoint; 3]);

impl Waypoints {
    pub const STATIONARY: Waypoints = Waypoints([LocalPoint::ORIGIN; 3]);

    /// Accumulate deltas from the ego origin: each waypoint is the prefix
    /// sum of the deltas so far.
    pub fn from_deltas(deltas: [WaypointDelta; 3]) -> Self {
        let mut cur = LocalPoint::ORIGIN;
        let mut out = [LocalPoint::ORIGIN; 3];
        for (slot, d) in out.iter_mut().zip(deltas) {
            cur = LocalPoint::new(cur.x + d.dx, cur.y + d.dy);
            *slot = cur;
        }
        Waypoints(out)
    }

    pub fn points(&self) -> &[LocalPoint; 3] {
        &self.0
    }
}
