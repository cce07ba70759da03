//! Bundled demo worlds. Each is also committed as a TOML map file under
//! `assets/maps/` (a test keeps the two in sync).
//!
//! All roads are two-lane, 7 m wide, right-hand traffic; routes follow the
//! center of the right lane.

use sdc_core::classes;
use sdc_core::geom::{convex_overlap, oriented_rect, Vec2};
use sdc_core::world::{
    ActorKind, Behavior, DoubleGreenSpec, Intersection, NpcScript, RouteSpec, StaticObstacle, StopSign, TimedPoint,
    TrafficLight, Trigger, VehicleParams, WorldMap,
};

use crate::config::{MapFile, SCHEMA_VERSION};

pub const NAMES: [&str; 3] = ["straight_two_turn", "pedestrian_crossing", "intersection"];

const HALF_ROAD: f64 = 3.5;
const LANE_OFFSET: f64 = 1.75;
const SIDEWALK: f64 = 2.5;

pub fn by_name(name: &str) -> Option<MapFile> {
    match name {
        "straight_two_turn" => Some(straight_two_turn()),
        "pedestrian_crossing" => Some(pedestrian_crossing()),
        "intersection" => Some(intersection()),
        _ => None,
    }
}

/// Right-hand normal of a direction.
fn right(d: Vec2) -> Vec2 {
    Vec2::new(d.y, -d.x)
}

fn rotate(v: Vec2, angle: f64) -> Vec2 {
    let (s, c) = angle.sin_cos();
    Vec2::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

/// Centerline built from straights and circular arcs.
struct PathBuilder {
    points: Vec<Vec2>,
    dir: Vec2,
}

impl PathBuilder {
    fn new(start: Vec2, dir: Vec2) -> Self {
        PathBuilder {
            points: vec![start],
            dir: dir.normalized(),
        }
    }

    fn pos(&self) -> Vec2 {
        *self.points.last().unwrap()
    }

    fn straight(&mut self, len: f64) -> &mut Self {
        let p = self.pos() + self.dir * len;
        self.points.push(p);
        self
    }

    /// Arc of `degrees` (positive turns right) sampled every 7.5°.
    fn turn(&mut self, radius: f64, degrees: f64) -> &mut Self {
        let side = if degrees > 0.0 { right(self.dir) } else { -right(self.dir) };
        let center = self.pos() + side * radius;
        let start = self.pos() - center;
        let n = (degrees.abs() / 7.5).ceil() as usize;
        let total = -degrees.to_radians();
        for k in 1..=n {
            let a = total * k as f64 / n as f64;
            self.points.push(center + rotate(start, a));
        }
        self.dir = rotate(self.dir, total);
        self
    }

    fn index(&self) -> usize {
        self.points.len() - 1
    }
}

/// Unit tangent at every vertex, averaged over the adjacent segments.
fn vertex_tangents(pts: &[Vec2]) -> Vec<Vec2> {
    let n = pts.len();
    (0..n)
        .map(|i| {
            let a = pts[i.saturating_sub(1)];
            let b = pts[(i + 1).min(n - 1)];
            (b - a).normalized()
        })
        .collect()
}

/// Polyline offset sideways by `offset` (positive to the right).
fn offset_line(pts: &[Vec2], offset: f64) -> Vec<Vec2> {
    pts.iter()
        .zip(vertex_tangents(pts))
        .map(|(p, t)| *p + right(t) * offset)
        .collect()
}

/// Overlap between neighbouring strip quads, so points on a shared edge are
/// inside at least one of them.
const SEAM: f64 = 0.05;

/// Quads covering the band between two lateral offsets of a centerline.
fn strip(pts: &[Vec2], from: f64, to: f64) -> Vec<Vec<Vec2>> {
    let a = offset_line(pts, from);
    let b = offset_line(pts, to);
    let t = vertex_tangents(pts);
    (0..pts.len() - 1)
        .map(|i| {
            let (back, ahead) = (t[i] * SEAM, t[i + 1] * SEAM);
            let mut q = vec![a[i] - back, b[i] - back, b[i + 1] + ahead, a[i + 1] + ahead];
            if sdc_core::geom::signed_area(&q) < 0.0 {
                q.reverse();
            }
            q
        })
        .collect()
}

struct MapBuilder {
    map: WorldMap,
}

impl MapBuilder {
    fn new(name: &str) -> Self {
        MapBuilder {
            map: WorldMap {
                name: name.to_string(),
                roads: Vec::new(),
                lanes: Vec::new(),
                sidewalks: Vec::new(),
                markings: Vec::new(),
                marking_width: 0.15,
                obstacles: Vec::new(),
                intersections: Vec::new(),
                traffic_lights: Vec::new(),
                stop_signs: Vec::new(),
                ground_class: classes::TERRAIN,
                lane_width: 2.0 * LANE_OFFSET,
            },
        }
    }

    /// Road along `pts` with a center line, both lanes and both sidewalks.
    fn road(&mut self, pts: &[Vec2], sidewalks: bool) {
        self.map.roads.extend(strip(pts, -HALF_ROAD, HALF_ROAD));
        if sidewalks {
            self.map.sidewalks.extend(strip(pts, HALF_ROAD, HALF_ROAD + SIDEWALK));
            self.map.sidewalks.extend(strip(pts, -HALF_ROAD - SIDEWALK, -HALF_ROAD));
        }
        self.map.lanes.push(offset_line(pts, LANE_OFFSET));
        let mut back = offset_line(pts, -LANE_OFFSET);
        back.reverse();
        self.map.lanes.push(back);
    }

    fn marking(&mut self, from: Vec2, to: Vec2) {
        self.map.markings.push(vec![from, to]);
    }

    /// Boxes along `pts` at `setback` meters either side, every `spacing`
    /// meters; boxes touching a road or sidewalk are dropped.
    fn scenery(&mut self, pts: &[Vec2], setback: f64, spacing: f64) {
        let path = sdc_core::geom::Polyline::new(pts.to_vec());
        let mut k = 0;
        let mut s = spacing / 2.0;
        while s < path.length() {
            let p = path.point_at(s);
            let t = path.tangent_at(s);
            for side in [1.0, -1.0] {
                let (len, wid, height, class) = if k % 3 == 2 {
                    (5.0, 5.0, 4.0, classes::VEGETATION)
                } else {
                    (12.0, 8.0, 8.0 + 3.0 * (k % 4) as f64, classes::BUILDING)
                };
                let center = p + right(t) * (side * (setback + wid / 2.0));
                let footprint = oriented_rect(center, t, len, wid).to_vec();
                let guard = oriented_rect(center, t, len + 2.0, wid + 2.0);
                let clear = self
                    .map
                    .roads
                    .iter()
                    .chain(&self.map.sidewalks)
                    .all(|poly| !convex_overlap(&guard, poly))
                    && self.map.obstacles.iter().all(|o| !convex_overlap(&guard, &o.footprint));
                if clear {
                    self.map.obstacles.push(StaticObstacle {
                        footprint,
                        height,
                        class,
                    });
                }
                k += 1;
            }
            s += spacing;
        }
    }
}

fn route_along(name: &str, centerline: &[Vec2]) -> RouteSpec {
    RouteSpec::new(name, offset_line(centerline, LANE_OFFSET))
}

fn map_file(map: WorldMap, scripts: Vec<NpcScript>, routes: Vec<RouteSpec>) -> MapFile {
    MapFile {
        schema_version: SCHEMA_VERSION,
        vehicle: VehicleParams::default(),
        map,
        scripts,
        routes,
    }
}

/// A straight followed by a right and a left turn, with no traffic.
pub fn straight_two_turn() -> MapFile {
    let mut b = PathBuilder::new(Vec2::new(0.0, -15.0), Vec2::new(0.0, 1.0));
    b.straight(15.0);
    let first = b.index();
    b.straight(100.0).turn(15.0, 90.0).straight(60.0).turn(15.0, -90.0).straight(80.0);
    let last = b.index();
    b.straight(20.0);
    let center = b.points.clone();

    let mut m = MapBuilder::new("straight_two_turn");
    m.road(&center, true);
    let edge = |off: f64| offset_line(&center, off);
    m.map.markings.push(center.clone());
    m.map.markings.push(edge(HALF_ROAD - 0.3));
    m.map.markings.push(edge(-HALF_ROAD + 0.3));
    m.scenery(&center, HALF_ROAD + SIDEWALK + 3.0, 25.0);
    let route = route_along("straight_two_turn", &center[first..=last]);
    map_file(m.map, Vec::new(), vec![route])
}

/// Straight road where, in adversarial runs, a pedestrian steps off the
/// right sidewalk into the ego lane at y = 60.
pub fn pedestrian_crossing() -> MapFile {
    let center = vec![Vec2::new(0.0, -15.0), Vec2::new(0.0, 180.0)];
    let mut m = MapBuilder::new("pedestrian_crossing");
    m.road(&center, true);
    m.map.markings.push(center.clone());
    m.scenery(&center, HALF_ROAD + SIDEWALK + 3.0, 25.0);

    let at = |t: f64, x: f64, y: f64| TimedPoint {
        t,
        position: Vec2::new(x, y),
    };
    let crossing = NpcScript {
        kind: ActorKind::Pedestrian,
        path: vec![at(0.0, 5.5, 60.0), at(11.0 / 1.5, -5.5, 60.0)],
        trigger: Trigger::Proximity { radius: 25.0 },
        behavior: Behavior::AdversarialCross,
        anchor: Some(Vec2::new(LANE_OFFSET, 60.0)),
        double_green: None,
    };
    let stroller = NpcScript {
        kind: ActorKind::Pedestrian,
        path: vec![at(0.0, -5.0, 20.0), at(80.0, -5.0, 120.0)],
        trigger: Trigger::Time { at: 0.0 },
        behavior: Behavior::Lawful,
        anchor: None,
        double_green: None,
    };
    let route = RouteSpec::new(
        "pedestrian_crossing",
        vec![Vec2::new(LANE_OFFSET, 0.0), Vec2::new(LANE_OFFSET, 150.0)],
    );
    map_file(m.map, vec![crossing, stroller], vec![route])
}

/// North-south road through a signalized crossroads at y = 100 and a
/// stop-controlled T junction at y = 200. Oncoming traffic uses the other
/// lane; in adversarial runs a vehicle runs a double green through the
/// crossroads.
pub fn intersection() -> MapFile {
    let x0 = 100.0;
    let x1 = 200.0;
    let mut m = MapBuilder::new("intersection");
    let south = [Vec2::new(0.0, -15.0), Vec2::new(0.0, x0 - HALF_ROAD)];
    let middle = [Vec2::new(0.0, x0 + HALF_ROAD), Vec2::new(0.0, x1 - HALF_ROAD)];
    let north = [Vec2::new(0.0, x1 + HALF_ROAD), Vec2::new(0.0, 270.0)];
    let west = [Vec2::new(-80.0, x0), Vec2::new(-HALF_ROAD, x0)];
    let east = [Vec2::new(HALF_ROAD, x0), Vec2::new(80.0, x0)];
    let branch = [Vec2::new(HALF_ROAD, x1), Vec2::new(80.0, x1)];
    for seg in [&south, &middle, &north, &west, &east, &branch] {
        m.road(seg.as_slice(), true);
        m.marking(seg[0], seg[1]);
    }
    let square = |cy: f64| {
        vec![
            Vec2::new(-HALF_ROAD, cy - HALF_ROAD),
            Vec2::new(HALF_ROAD, cy - HALF_ROAD),
            Vec2::new(HALF_ROAD, cy + HALF_ROAD),
            Vec2::new(-HALF_ROAD, cy + HALF_ROAD),
        ]
    };
    m.map.roads.push(square(x0));
    m.map.roads.push(square(x1));
    // the T junction has no west arm; close it with sidewalk
    m.map.sidewalks.push(vec![
        Vec2::new(-HALF_ROAD - SIDEWALK, x1 - HALF_ROAD),
        Vec2::new(-HALF_ROAD, x1 - HALF_ROAD),
        Vec2::new(-HALF_ROAD, x1 + HALF_ROAD),
        Vec2::new(-HALF_ROAD - SIDEWALK, x1 + HALF_ROAD),
    ]);

    m.map.intersections.push(Intersection {
        green_s: 10.0,
        yellow_s: 3.0,
        all_red_s: 1.0,
        offset_s: 0.0,
    });
    let stop = x0 - HALF_ROAD - 1.0;
    let light = |position: Vec2, line: [Vec2; 2], direction: Vec2, phase: u8| TrafficLight {
        position,
        stop_line: line,
        direction,
        intersection: 0,
        phase,
    };
    let lights = [
        light(
            Vec2::new(4.5, stop),
            [Vec2::new(0.0, stop), Vec2::new(HALF_ROAD, stop)],
            Vec2::new(0.0, 1.0),
            0,
        ),
        light(
            Vec2::new(-4.5, 2.0 * x0 - stop),
            [Vec2::new(-HALF_ROAD, 2.0 * x0 - stop), Vec2::new(0.0, 2.0 * x0 - stop)],
            Vec2::new(0.0, -1.0),
            0,
        ),
        light(
            Vec2::new(-HALF_ROAD - 1.5, x0 - 4.5),
            [Vec2::new(-HALF_ROAD - 1.0, x0 - HALF_ROAD), Vec2::new(-HALF_ROAD - 1.0, x0)],
            Vec2::new(1.0, 0.0),
            1,
        ),
        light(
            Vec2::new(HALF_ROAD + 1.0, x0 + 4.5),
            [Vec2::new(HALF_ROAD + 1.0, x0), Vec2::new(HALF_ROAD + 1.0, x0 + HALF_ROAD)],
            Vec2::new(-1.0, 0.0),
            1,
        ),
    ];
    for tl in lights {
        m.marking(tl.stop_line[0], tl.stop_line[1]);
        m.map.traffic_lights.push(tl);
    }

    let zone_end = x1 - HALF_ROAD - 0.5;
    m.map.stop_signs.push(StopSign {
        position: Vec2::new(4.5, zone_end),
        zone: vec![
            Vec2::new(0.0, zone_end - 6.0),
            Vec2::new(HALF_ROAD, zone_end - 6.0),
            Vec2::new(HALF_ROAD, zone_end),
            Vec2::new(0.0, zone_end),
        ],
    });
    m.marking(Vec2::new(0.0, zone_end), Vec2::new(HALF_ROAD, zone_end));

    let setback = HALF_ROAD + SIDEWALK + 3.0;
    for seg in [&south, &middle, &north, &west, &east, &branch] {
        m.scenery(seg.as_slice(), setback, 25.0);
    }

    let at = |t: f64, x: f64, y: f64| TimedPoint {
        t,
        position: Vec2::new(x, y),
    };
    let oncoming = NpcScript {
        kind: ActorKind::Vehicle,
        path: vec![at(0.0, -LANE_OFFSET, 270.0), at(285.0 / 6.0, -LANE_OFFSET, -15.0)],
        trigger: Trigger::Time { at: 0.0 },
        behavior: Behavior::Lawful,
        anchor: None,
        double_green: None,
    };
    let cyclist = NpcScript {
        kind: ActorKind::Bicyclist,
        path: vec![at(0.0, 60.0, x1 - LANE_OFFSET), at(56.0 / 4.0, 4.0 + HALF_ROAD + 1.0, x1 - LANE_OFFSET)],
        trigger: Trigger::Time { at: 5.0 },
        behavior: Behavior::Lawful,
        anchor: None,
        double_green: None,
    };
    let runner = NpcScript {
        kind: ActorKind::Vehicle,
        path: vec![at(0.0, 45.0, x0 + LANE_OFFSET), at(125.0 / 9.0, -80.0, x0 + LANE_OFFSET)],
        trigger: Trigger::Proximity { radius: 35.0 },
        behavior: Behavior::RunsDoubleGreen,
        anchor: Some(Vec2::new(LANE_OFFSET, x0)),
        double_green: Some(DoubleGreenSpec {
            intersection: 0,
            duration_s: 6.0,
        }),
    };
    let route = RouteSpec::new(
        "intersection_north",
        vec![Vec2::new(LANE_OFFSET, 0.0), Vec2::new(LANE_OFFSET, 255.0)],
    );
    map_file(m.map, vec![oncoming, cyclist, runner], vec![route])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demos_are_valid_worlds() {
        for name in NAMES {
            let file = by_name(name).unwrap();
            let world = file.world().unwrap();
            assert!(!world.map.obstacles.is_empty(), "{name} has no scenery");
            for r in &file.routes {
                for p in &r.goal_points {
                    assert!(world.map.is_on_road(*p), "{name}: route leaves the road at {p:?}");
                }
            }
        }
    }

    #[test]
    fn turn_ends_on_the_circle() {
        let mut b = PathBuilder::new(Vec2::ZERO, Vec2::new(0.0, 1.0));
        b.turn(10.0, 90.0);
        let end = b.pos();
        assert!((end.x - 10.0).abs() < 1e-9 && (end.y - 10.0).abs() < 1e-9, "{end:?}");
        assert!((b.dir.x - 1.0).abs() < 1e-12 && b.dir.y.abs() < 1e-12);
    }

    #[test]
    fn straight_two_turn_route_length() {
        let file = straight_two_turn();
        let len = file.routes[0].total_length();
        // 240 m of straights plus two quarter arcs of radii 13.25 and 16.75
        assert!(len > 270.0 && len < 290.0, "{len}");
    }
}
