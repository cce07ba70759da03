use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::geom::{Polyline, Projection, Vec2};
use crate::{Error, Result};

/// Sparse goal points from the global planner. The dense reference path is
/// the polyline through them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteSpec {
    #[serde(default)]
    pub name: String,
    pub goal_points: Vec<Vec2>,
    /// Total length in meters; filled in from the goal points when omitted.
    #[serde(default)]
    pub length: Option<f64>,
}

impl RouteSpec {
    pub fn new(name: impl Into<String>, goal_points: Vec<Vec2>) -> Self {
        let length = Polyline::new(goal_points.clone()).length();
        RouteSpec {
            name: name.into(),
            goal_points,
            length: Some(length),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.goal_points.len() < 2 {
            return Err(Error::InvalidRoute(format!("route `{}` needs at least 2 goal points", self.name)));
        }
        for w in self.goal_points.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidRoute(format!("route `{}` repeats goal point {:?}", self.name, w[0])));
            }
        }
        if self.goal_points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidRoute(format!("route `{}` has non-finite points", self.name)));
        }
        let dense = Polyline::new(self.goal_points.clone()).length();
        if let Some(len) = self.length {
            if libm::fabs(len - dense) > 1e-6 * dense.max(1.0) {
                return Err(Error::InvalidRoute(format!(
                    "route `{}` declares length {len} but its path is {dense} m",
                    self.name
                )));
            }
        }
        Ok(())
    }

    pub fn total_length(&self) -> f64 {
        self.reference_path().length()
    }

    pub fn reference_path(&self) -> ReferencePath {
        ReferencePath::new(&self.goal_points)
    }
}

/// Dense reference path with arc positions of the goal points.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePath {
    line: Polyline,
}

impl ReferencePath {
    pub fn new(goal_points: &[Vec2]) -> Self {
        ReferencePath {
            line: Polyline::new(goal_points.to_vec()),
        }
    }

    pub fn polyline(&self) -> &Polyline {
        &self.line
    }

    pub fn length(&self) -> f64 {
        self.line.length()
    }

    pub fn point_at(&self, s: f64) -> Vec2 {
        self.line.point_at(s)
    }

    pub fn project(&self, p: Vec2) -> Projection {
        self.line.project(p)
    }

    /// Next goal point at least `min_ahead` meters beyond arc position `s`,
    /// or the final goal point.
    pub fn route_target(&self, s: f64, min_ahead: f64) -> Vec2 {
        let pts = self.line.points();
        for (p, c) in pts.iter().zip(self.line.cumulative()) {
            if *c > s + min_ahead {
                return *p;
            }
        }
        pts[pts.len() - 1]
    }

    pub fn end(&self) -> Vec2 {
        let pts = self.line.points();
        pts[pts.len() - 1]
    }
}

/// Tracks monotone progress along a reference path. The projection is
/// searched in a window around the last progress so that loops or
/// neighbouring parallel segments cannot make progress jump.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteTracker {
    path: ReferencePath,
    progress: f64,
    last: Projection,
}

impl RouteTracker {
    pub const BACK_WINDOW: f64 = 10.0;
    pub const FORWARD_WINDOW: f64 = 30.0;

    pub fn new(path: ReferencePath, start: Vec2) -> Self {
        let last = path.polyline().project_window(start, 0.0, Self::FORWARD_WINDOW);
        RouteTracker {
            progress: last.s,
            path,
            last,
        }
    }

    pub fn path(&self) -> &ReferencePath {
        &self.path
    }

    /// Best arc position reached so far.
    pub fn progress(&self) -> f64 {
        self.progress
    }

    /// Latest projection (arc position and distance to the path).
    pub fn last_projection(&self) -> Projection {
        self.last
    }

    pub fn update(&mut self, p: Vec2) -> Projection {
        let proj = self.path.polyline().project_window(
            p,
            self.progress - Self::BACK_WINDOW,
            self.progress + Self::FORWARD_WINDOW,
        );
        if proj.s > self.progress {
            self.progress = proj.s;
        }
        self.last = proj;
        proj
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn length_is_polyline_length() {
        let r = RouteSpec::new("l", vec![Vec2::ZERO, Vec2::new(0.0, 30.0), Vec2::new(40.0, 30.0)]);
        assert_eq!(r.length, Some(70.0));
        r.validate().unwrap();
        let mut wrong = r.clone();
        wrong.length = Some(71.0);
        assert!(wrong.validate().is_err());
    }

    #[test]
    fn repeated_points_rejected() {
        let r = RouteSpec::new("r", vec![Vec2::ZERO, Vec2::ZERO, Vec2::new(1.0, 0.0)]);
        assert!(r.validate().is_err());
    }

    #[test]
    fn tracker_is_monotone() {
        let r = RouteSpec::new("t", vec![Vec2::ZERO, Vec2::new(0.0, 100.0)]);
        let mut t = RouteTracker::new(r.reference_path(), Vec2::ZERO);
        t.update(Vec2::new(0.5, 20.0));
        assert_eq!(t.progress(), 20.0);
        t.update(Vec2::new(0.5, 15.0));
        assert_eq!(t.progress(), 20.0);
        assert_eq!(t.last_projection().s, 15.0);
    }

    #[test]
    fn route_target_skips_close_points() {
        let p = ReferencePath::new(&[Vec2::ZERO, Vec2::new(0.0, 3.0), Vec2::new(0.0, 50.0)]);
        assert_eq!(p.route_target(0.0, 4.0), Vec2::new(0.0, 50.0));
        assert_eq!(p.route_target(60.0, 4.0), Vec2::new(0.0, 50.0));
    }
}
