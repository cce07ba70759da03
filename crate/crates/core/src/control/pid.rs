use alloc::collections::VecDeque;
use core::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::types::{VehicularControls, Waypoints};
use crate::math::{atan2, clamp, sqrt};

/// Gains of one PID loop. The integral term is the mean error over the last
/// `window` updates, clamped to `±windup`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gains {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
    pub window: usize,
    pub windup: f64,
}

impl Gains {
    pub fn is_valid(&self) -> bool {
        self.window > 0 && [self.kp, self.ki, self.kd, self.windup].iter().all(|g| g.is_finite() && *g >= 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PidGains {
    pub lateral: Gains,
    pub longitudinal: Gains,
}

impl Default for PidGains {
    fn default() -> Self {
        PidGains {
            lateral: Gains {
                kp: 0.9,
                ki: 0.75,
                kd: 0.3,
                window: 40,
                windup: 1.0,
            },
            longitudinal: Gains {
                kp: 5.0,
                ki: 0.5,
                kd: 1.0,
                window: 40,
                windup: 1.0,
            },
        }
    }
}

impl PidGains {
    pub fn is_valid(&self) -> bool {
        self.lateral.is_valid() && self.longitudinal.is_valid()
    }
}

/// Discrete PID loop evaluated once per control step over a sliding window
/// of recent errors. The derivative is the change since the previous
/// update, zero on the first update after construction or [`Pid::reset`].
#[derive(Debug, Clone, PartialEq)]
pub struct Pid {
    gains: Gains,
    window: VecDeque<f64>,
}

impl Pid {
    pub fn new(gains: Gains) -> Self {
        Pid {
            gains,
            window: VecDeque::with_capacity(gains.window),
        }
    }

    pub fn reset(&mut self) {
        self.window.clear();
    }

    pub fn update(&mut self, error: f64) -> f64 {
        let g = self.gains;
        let derivative = self.window.back().map_or(0.0, |prev| error - prev);
        if self.window.len() == g.window.max(1) {
            self.window.pop_front();
        }
        self.window.push_back(error);
        let mean = self.window.iter().sum::<f64>() / self.window.len() as f64;
        let integral = clamp(mean, -g.windup, g.windup);
        g.kp * error + g.ki * integral + g.kd * derivative
    }
}

/// Aim angle and desired speed from the first two waypoints.
///
/// The aim point is their midpoint; the angle is measured from the forward
/// axis, positive to the right, and is 0 when the aim point is the origin.
/// The desired speed is twice their separation.
pub fn aim_and_speed(wp: &Waypoints) -> (f64, f64) {
    let [a, b, _] = wp.0;
    let mx = (a.x + b.x) / 2.0;
    let my = (a.y + b.y) / 2.0;
    let theta = if mx == 0.0 && my == 0.0 { 0.0 } else { atan2(mx, my) };
    let (dx, dy) = (a.x - b.x, a.y - b.y);
    (theta, 2.0 * sqrt(dx * dx + dy * dy))
}

/// Waypoint-following agent: a lateral loop on the aim angle (normalized by
/// a right angle) and a longitudinal loop on the speed error. Never brakes;
/// braking is left to the control policy.
#[derive(Debug, Clone, PartialEq)]
pub struct PidAgent {
    lateral: Pid,
    longitudinal: Pid,
}

impl PidAgent {
    pub fn new(gains: PidGains) -> Self {
        PidAgent {
            lateral: Pid::new(gains.lateral),
            longitudinal: Pid::new(gains.longitudinal),
        }
    }

    pub fn reset(&mut self) {
        self.lateral.reset();
        self.longitudinal.reset();
    }

    pub fn control(&mut self, wp: &Waypoints, speed: f64) -> VehicularControls {
        let (theta, gamma) = aim_and_speed(wp);
        let steering = self.lateral.update(theta / FRAC_PI_2);
        let throttle = self.longitudinal.update(gamma - speed);
        VehicularControls {
            steering: clamp(steering, -1.0, 1.0),
            throttle: clamp(throttle, 0.0, VehicularControls::MAX_THROTTLE),
            brake: 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::LocalPoint;
    use alloc::vec::Vec;

    #[test]
    fn aim_examples() {
        let wp = Waypoints([LocalPoint::new(0.0, 1.0), LocalPoint::new(0.0, 3.0), LocalPoint::new(0.0, 5.0)]);
        assert_eq!(aim_and_speed(&wp), (0.0, 4.0));
        assert_eq!(aim_and_speed(&Waypoints::STATIONARY), (0.0, 0.0));
        let right = Waypoints([LocalPoint::new(1.0, 1.0), LocalPoint::new(1.0, 1.0), LocalPoint::ORIGIN]);
        assert_eq!(aim_and_speed(&right).0, core::f64::consts::FRAC_PI_4);
    }

    #[test]
    fn zero_inputs_zero_outputs() {
        let mut agent = PidAgent::new(PidGains::default());
        let c = agent.control(&Waypoints::STATIONARY, 0.0);
        assert_eq!(c, VehicularControls::default());
    }

    #[test]
    fn matched_speed_first_call_is_zero() {
        let mut agent = PidAgent::new(PidGains::default());
        let wp = Waypoints([LocalPoint::new(0.0, 2.0), LocalPoint::new(0.0, 4.0), LocalPoint::new(0.0, 6.0)]);
        assert_eq!(agent.control(&wp, 4.0).throttle, 0.0);
    }

    #[test]
    fn reset_replays_identically() {
        let mut pid = Pid::new(PidGains::default().longitudinal);
        let errors = [0.3, -1.2, 4.0, 0.0, 2.5, -0.7];
        let a: Vec<f64> = errors.iter().map(|&e| pid.update(e)).collect();
        pid.reset();
        let b: Vec<f64> = errors.iter().map(|&e| pid.update(e)).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn integral_is_windowed_and_clamped() {
        let g = Gains {
            kp: 0.0,
            ki: 1.0,
            kd: 0.0,
            window: 4,
            windup: 0.5,
        };
        let mut pid = Pid::new(g);
        for _ in 0..100 {
            pid.update(10.0);
        }
        assert_eq!(pid.update(10.0), 0.5);
        for _ in 0..4 {
            pid.update(0.0);
        }
        assert_eq!(pid.update(0.0), 0.0);
        assert_eq!(pid.update(0.4), 0.1);
    }

    #[test]
    fn stops_throttling_once_stationary() {
        let mut agent = PidAgent::new(PidGains::default());
        let go = Waypoints([LocalPoint::new(0.0, 2.0), LocalPoint::new(0.0, 4.0), LocalPoint::new(0.0, 6.0)]);
        for _ in 0..200 {
            agent.control(&go, 3.9);
        }
        let mut last = agent.control(&Waypoints::STATIONARY, 0.0);
        for _ in 0..40 {
            last = agent.control(&Waypoints::STATIONARY, 0.0);
        }
        assert_eq!(last.throttle, 0.0);
    }
}
