use serde::{Deserialize, Serialize};

use crate::control::VehicularControls;
use crate::geom::{oriented_rect, Vec2};
use crate::math::{self, sin_cos_deg};

/// Global pose. `heading` is the compass heading in degrees, normalized to
/// `[-180, 180)`.
///
/// The world frame is laid out so that the GPS-compass transform maps the
/// vehicle's forward direction onto the local `+y` axis: heading 0 faces
/// world `-x`, and heading grows counterclockwise. [`Pose::forward`] and
/// [`Pose::right`] are the only places that encode this.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub heading: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, heading: f64) -> Self {
        Pose {
            x,
            y,
            heading: math::normalize_degrees(heading),
        }
    }

    /// Pose at `position` facing along `direction`.
    pub fn facing(position: Vec2, direction: Vec2) -> Self {
        let heading = math::to_degrees(math::atan2(-direction.y, -direction.x));
        Pose::new(position.x, position.y, heading)
    }

    #[inline]
    pub fn position(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    /// Unit forward vector in the world frame.
    #[inline]
    pub fn forward(&self) -> Vec2 {
        let (s, c) = sin_cos_deg(self.heading);
        Vec2::new(-c, -s)
    }

    /// Unit vector pointing to the vehicle's right.
    #[inline]
    pub fn right(&self) -> Vec2 {
        let (s, c) = sin_cos_deg(self.heading);
        Vec2::new(-s, c)
    }
}

/// Vehicle geometry and longitudinal dynamics constants. The pose reference
/// point is the rear axle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VehicleParams {
    pub wheelbase: f64,
    pub length: f64,
    pub width: f64,
    /// Road-wheel angle at full lock (`|steering| = 1`), degrees.
    pub max_steer_deg: f64,
    /// Acceleration at full throttle (0.75), m/s².
    pub accel_max: f64,
    /// Deceleration at full brake, m/s².
    pub brake_decel: f64,
    /// Linear drag, 1/s.
    pub drag: f64,
    pub v_max: f64,
}

impl Default for VehicleParams {
    fn default() -> Self {
        VehicleParams {
            wheelbase: 2.9,
            length: 4.6,
            width: 2.0,
            max_steer_deg: 60.0,
            accel_max: 3.0,
            brake_decel: 8.0,
            drag: 0.25,
            v_max: 15.0,
        }
    }
}

impl VehicleParams {
    /// Path curvature (1/m, positive to the right) for a normalized steering
    /// command.
    pub fn curvature(&self, steering: f64) -> f64 {
        math::tan(math::to_radians(self.max_steer_deg * steering)) / self.wheelbase
    }

    /// Center of the body rectangle, relative to the rear axle along the
    /// forward axis.
    pub fn body_offset(&self) -> f64 {
        0.5 * self.wheelbase
    }

    /// Distance from the rear axle to the front bumper.
    pub fn front_offset(&self) -> f64 {
        self.body_offset() + 0.5 * self.length
    }

    pub fn footprint(&self, pose: &Pose) -> [Vec2; 4] {
        let f = pose.forward();
        oriented_rect(pose.position() + f * self.body_offset(), f, self.length, self.width)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EgoState {
    pub pose: Pose,
    /// m/s, never negative.
    pub speed: f64,
    pub controls: VehicularControls,
}

/// Advance the ego over `dt` with the kinematic bicycle model. Each step is
/// integrated as an exact constant-curvature arc, so a held steering command
/// traces a circle of radius `wheelbase / tan(δ)`.
pub(crate) fn advance_ego(ego: &EgoState, controls: VehicularControls, params: &VehicleParams, dt: f64) -> EgoState {
    let v = ego.speed;
    let accel = params.accel_max * (controls.throttle / 0.75) - params.brake_decel * controls.brake - params.drag * v;

    let (distance, speed) = if accel < 0.0 && v + accel * dt <= 0.0 {
        let t_stop = if accel < 0.0 { -v / accel } else { 0.0 };
        (v * t_stop + 0.5 * accel * t_stop * t_stop, 0.0)
    } else if accel > 0.0 && v + accel * dt > params.v_max {
        let t_cap = ((params.v_max - v) / accel).max(0.0);
        (
            v * t_cap + 0.5 * accel * t_cap * t_cap + params.v_max * (dt - t_cap),
            params.v_max,
        )
    } else {
        (v * dt + 0.5 * accel * dt * dt, v + accel * dt)
    };
    let distance = distance.max(0.0);

    let kappa = params.curvature(controls.steering);
    let heading0 = ego.pose.heading;
    let turn = kappa * distance;
    let f0 = ego.pose.forward();
    let p0 = ego.pose.position();
    let p1 = if libm::fabs(turn) < 1e-12 {
        p0 + f0 * distance
    } else {
        // Counterclockwise curvature is -kappa in the world frame.
        let omega = -kappa;
        let phi0 = math::atan2(f0.y, f0.x);
        let phi1 = phi0 + omega * distance;
        Vec2::new(
            p0.x + (libm::sin(phi1) - libm::sin(phi0)) / omega,
            p0.y + (libm::cos(phi0) - libm::cos(phi1)) / omega,
        )
    };
    let heading1 = heading0 - math::to_degrees(turn);
    EgoState {
        pose: Pose::new(p1.x, p1.y, heading1),
        speed,
        controls,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn facing_matches_forward() {
        for dir in [Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(-3.0, 4.0)] {
            let p = Pose::facing(Vec2::ZERO, dir);
            let f = p.forward();
            let d = dir.normalized();
            assert!((f.x - d.x).abs() < 1e-12 && (f.y - d.y).abs() < 1e-12);
        }
        // right = forward rotated clockwise
        let p = Pose::new(0.0, 0.0, 33.0);
        let r = p.right();
        let f = p.forward();
        assert!((r.x - f.y).abs() < 1e-12 && (r.y + f.x).abs() < 1e-12);
    }

    #[test]
    fn positive_steering_turns_right() {
        let params = VehicleParams::default();
        let ego = EgoState {
            pose: Pose::facing(Vec2::ZERO, Vec2::new(0.0, 1.0)),
            speed: 5.0,
            controls: VehicularControls::default(),
        };
        let c = VehicularControls { steering: 0.3, throttle: 0.0, brake: 0.0 };
        let next = advance_ego(&ego, c, &params, 0.5);
        // facing +y, right is +x
        assert!(next.pose.x > 0.0);
        assert!(next.pose.y > 0.0);
    }
}
