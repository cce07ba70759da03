use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::classes;
use crate::geom::{is_convex, point_in_polygon, Vec2};
use crate::{Error, Result};

/// Static world geometry. Polygons are in global meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldMap {
    #[serde(default)]
    pub name: String,
    /// Drivable regions.
    pub roads: Vec<Vec<Vec2>>,
    /// Lane centerlines.
    #[serde(default)]
    pub lanes: Vec<Vec<Vec2>>,
    #[serde(default)]
    pub sidewalks: Vec<Vec<Vec2>>,
    /// Painted lane lines, rendered as class 6.
    #[serde(default)]
    pub markings: Vec<Vec<Vec2>>,
    #[serde(default = "default_marking_width")]
    pub marking_width: f64,
    #[serde(default)]
    pub obstacles: Vec<StaticObstacle>,
    #[serde(default)]
    pub intersections: Vec<Intersection>,
    #[serde(default)]
    pub traffic_lights: Vec<TrafficLight>,
    #[serde(default)]
    pub stop_signs: Vec<StopSign>,
    /// Class of ground that is neither road nor sidewalk.
    #[serde(default = "default_ground_class")]
    pub ground_class: u8,
    #[serde(default = "default_lane_width")]
    pub lane_width: f64,
}

fn default_marking_width() -> f64 {
    0.15
}
fn default_ground_class() -> u8 {
    classes::TERRAIN
}
fn default_lane_width() -> f64 {
    3.5
}

/// A convex footprint extruded from the ground to `height`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaticObstacle {
    pub footprint: Vec<Vec2>,
    pub height: f64,
    pub class: u8,
}

/// Fixed-time signal controller shared by the lights of one intersection.
/// Phase group 0 is green first; group 1 runs half a cycle later.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Intersection {
    pub green_s: f64,
    #[serde(default = "default_yellow")]
    pub yellow_s: f64,
    #[serde(default = "default_all_red")]
    pub all_red_s: f64,
    #[serde(default)]
    pub offset_s: f64,
}

fn default_yellow() -> f64 {
    3.0
}
fn default_all_red() -> f64 {
    1.0
}

impl Intersection {
    pub fn cycle(&self) -> f64 {
        2.0 * (self.green_s + self.yellow_s + self.all_red_s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrafficLight {
    pub position: Vec2,
    /// The controlled stop line.
    pub stop_line: [Vec2; 2],
    /// Direction of the traffic this light controls.
    pub direction: Vec2,
    pub intersection: usize,
    pub phase: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StopSign {
    pub position: Vec2,
    /// Trigger zone on the approach lane; traffic must come to a stop inside.
    pub zone: Vec<Vec2>,
}

impl WorldMap {
    pub fn is_on_road(&self, p: Vec2) -> bool {
        self.roads.iter().any(|poly| point_in_polygon(p, poly))
    }

    /// Check the structural invariants.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidMap(msg));
        for (i, poly) in self.roads.iter().chain(&self.sidewalks).enumerate() {
            if poly.len() < 3 {
                return bad(format!("polygon {i} has fewer than 3 vertices"));
            }
        }
        for (i, lane) in self.lanes.iter().enumerate() {
            if lane.len() < 2 {
                return bad(format!("lane {i} has fewer than 2 points"));
            }
            for w in lane.windows(2) {
                for p in [w[0], (w[0] + w[1]) * 0.5, w[1]] {
                    if !self.is_on_road(p) {
                        return bad(format!("lane {i} leaves the road at ({}, {})", p.x, p.y));
                    }
                }
            }
        }
        for (i, ob) in self.obstacles.iter().enumerate() {
            if !is_convex(&ob.footprint) {
                return bad(format!("obstacle {i} footprint is not convex"));
            }
            if !ob.height.is_finite() || ob.height <= 0.0 {
                return bad(format!("obstacle {i} has non-positive height"));
            }
            if !classes::is_valid(ob.class) {
                return bad(format!("obstacle {i} has class id {}", ob.class));
            }
        }
        if !classes::is_valid(self.ground_class) {
            return bad(format!("ground class {}", self.ground_class));
        }
        for (i, x) in self.intersections.iter().enumerate() {
            if !(x.green_s > 0.0 && x.yellow_s >= 0.0 && x.all_red_s >= 0.0) {
                return bad(format!("intersection {i} has an invalid timing plan"));
            }
        }
        for (i, tl) in self.traffic_lights.iter().enumerate() {
            if tl.intersection >= self.intersections.len() {
                return bad(format!("traffic light {i} references missing intersection {}", tl.intersection));
            }
            if tl.phase > 1 {
                return bad(format!("traffic light {i} phase must be 0 or 1"));
            }
            if tl.stop_line[0] == tl.stop_line[1] {
                return bad(format!("traffic light {i} stop line is degenerate"));
            }
            if tl.direction.norm() == 0.0 {
                return bad(format!("traffic light {i} direction is zero"));
            }
        }
        for (i, s) in self.stop_signs.iter().enumerate() {
            if s.zone.len() < 3 {
                return bad(format!("stop sign {i} zone has fewer than 3 vertices"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn strip() -> WorldMap {
        WorldMap {
            name: "strip".into(),
            roads: vec![vec![
                Vec2::new(-4.0, 0.0),
                Vec2::new(4.0, 0.0),
                Vec2::new(4.0, 100.0),
                Vec2::new(-4.0, 100.0),
            ]],
            lanes: vec![vec![Vec2::new(0.0, 1.0), Vec2::new(0.0, 99.0)]],
            sidewalks: vec![],
            markings: vec![],
            marking_width: 0.15,
            obstacles: vec![],
            intersections: vec![],
            traffic_lights: vec![],
            stop_signs: vec![],
            ground_class: classes::TERRAIN,
            lane_width: 3.5,
        }
    }

    #[test]
    fn valid_strip() {
        strip().validate().unwrap();
    }

    #[test]
    fn lane_off_road_rejected() {
        let mut m = strip();
        m.lanes[0].push(Vec2::new(10.0, 120.0));
        assert!(matches!(m.validate(), Err(Error::InvalidMap(_))));
    }

    #[test]
    fn light_needs_intersection() {
        let mut m = strip();
        m.traffic_lights.push(TrafficLight {
            position: Vec2::new(5.0, 50.0),
            stop_line: [Vec2::new(-4.0, 50.0), Vec2::new(4.0, 50.0)],
            direction: Vec2::new(0.0, 1.0),
            intersection: 0,
            phase: 0,
        });
        assert!(m.validate().is_err());
    }

    #[test]
    fn class_ids_checked() {
        let mut m = strip();
        m.obstacles.push(StaticObstacle {
            footprint: vec![Vec2::new(6.0, 0.0), Vec2::new(8.0, 0.0), Vec2::new(8.0, 2.0)],
            height: 3.0,
            class: 23,
        });
        assert!(m.validate().is_err());
    }
}
