use serde::{Deserialize, Serialize};

use super::map::Intersection;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LightState {
    Green,
    Yellow,
    Red,
}

/// Forces every light of one intersection green during `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LightOverride {
    pub intersection: usize,
    pub start: f64,
    pub end: f64,
}

impl LightOverride {
    pub fn active(&self, t: f64) -> bool {
        t >= self.start && t < self.end
    }
}

/// Fixed-time plan: group 0 sees green, yellow, then red; group 1 is the
/// same plan shifted by half a cycle. The all-red clearance separates the
/// two green windows.
pub(crate) fn scheduled_state(plan: &Intersection, phase: u8, t: f64) -> LightState {
    let cycle = plan.cycle();
    let shift = if phase == 0 { 0.0 } else { 0.5 * cycle };
    let x = t + plan.offset_s - shift;
    let tau = x - cycle * libm::floor(x / cycle);
    if tau < plan.green_s {
        LightState::Green
    } else if tau < plan.green_s + plan.yellow_s {
        LightState::Yellow
    } else {
        LightState::Red
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_never_green_together() {
        let plan = Intersection { green_s: 10.0, yellow_s: 3.0, all_red_s: 1.0, offset_s: 2.5 };
        let mut saw_green = [false, false];
        for k in 0..20_000 {
            let t = k as f64 * 0.01;
            let a = scheduled_state(&plan, 0, t);
            let b = scheduled_state(&plan, 1, t);
            assert!(!(a == LightState::Green && b == LightState::Green), "t={t}");
            saw_green[0] |= a == LightState::Green;
            saw_green[1] |= b == LightState::Green;
        }
        assert_eq!(saw_green, [true, true]);
    }

    #[test]
    fn plan_order() {
        let plan = Intersection { green_s: 10.0, yellow_s: 3.0, all_red_s: 1.0, offset_s: 0.0 };
        assert_eq!(scheduled_state(&plan, 0, 0.0), LightState::Green);
        assert_eq!(scheduled_state(&plan, 0, 11.0), LightState::Yellow);
        assert_eq!(scheduled_state(&plan, 0, 13.5), LightState::Red);
        assert_eq!(scheduled_state(&plan, 1, 0.0), LightState::Red);
        assert_eq!(scheduled_state(&plan, 1, 14.0), LightState::Green);
    }
}
