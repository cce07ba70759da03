use alloc::vec::Vec;

use super::camera::CameraIntrinsics;
use super::grid::{DepthMap, SemanticImage};
use crate::classes;
use crate::geom::{bounds, oriented_rect, point_in_polygon, segment_param, signed_area, Vec2};
use crate::math;
use crate::world::{Pose, World, WorldState};

/// Extruded convex footprint, stored counterclockwise.
#[derive(Debug, Clone)]
struct Prism {
    poly: Vec<Vec2>,
    height: f64,
    class: u8,
    center: Vec2,
    radius: f64,
}

impl Prism {
    fn new(mut poly: Vec<Vec2>, height: f64, class: u8) -> Self {
        if signed_area(&poly) < 0.0 {
            poly.reverse();
        }
        let n = poly.len() as f64;
        let center = poly.iter().fold(Vec2::ZERO, |a, p| a + *p) * (1.0 / n);
        let radius = poly.iter().map(|p| p.dist(center)).fold(0.0, f64::max);
        Prism {
            poly,
            height,
            class,
            center,
            radius,
        }
    }

    /// Entry parameter of the ray `origin + t·dir`, if it enters the prism
    /// from outside.
    fn entry(&self, origin: [f64; 3], dir: [f64; 3]) -> Option<f64> {
        let o = Vec2::new(origin[0], origin[1]);
        let d = Vec2::new(dir[0], dir[1]);
        // Bounding-circle rejection on the ground plane.
        let dd = d.dot(d);
        let oc = self.center - o;
        if dd > 0.0 {
            let t = (oc.dot(d) / dd).max(0.0);
            if (o + d * t).dist(self.center) > self.radius {
                return None;
            }
        } else if oc.norm() > self.radius {
            return None;
        }

        let mut t_in = f64::NEG_INFINITY;
        let mut t_out = f64::INFINITY;
        let n = self.poly.len();
        for i in 0..n {
            let a = self.poly[i];
            let e = self.poly[(i + 1) % n] - a;
            let normal = Vec2::new(e.y, -e.x);
            let num = (a - o).dot(normal);
            let den = d.dot(normal);
            if den == 0.0 {
                if num < 0.0 {
                    return None;
                }
            } else {
                let t = num / den;
                if den < 0.0 {
                    t_in = t_in.max(t);
                } else {
                    t_out = t_out.min(t);
                }
            }
        }
        if dir[2] == 0.0 {
            if origin[2] < 0.0 || origin[2] > self.height {
                return None;
            }
        } else {
            let t0 = -origin[2] / dir[2];
            let t1 = (self.height - origin[2]) / dir[2];
            t_in = t_in.max(t0.min(t1));
            t_out = t_out.min(t0.max(t1));
        }
        if t_in > t_out || t_in <= 0.0 {
            return None;
        }
        Some(t_in)
    }
}

/// Everything visible to the camera at one instant.
#[derive(Debug, Clone)]
pub struct RenderScene<'a> {
    world: &'a World,
    prisms: Vec<Prism>,
    road_bounds: Vec<(Vec2, Vec2)>,
    sidewalk_bounds: Vec<(Vec2, Vec2)>,
}

const LIGHT_POLE: (f64, f64) = (0.3, 4.0);
const SIGN_POLE: (f64, f64) = (0.3, 2.2);

impl<'a> RenderScene<'a> {
    pub fn new(world: &'a World, state: &WorldState) -> Self {
        let mut prisms: Vec<Prism> = world
            .map
            .obstacles
            .iter()
            .map(|o| Prism::new(o.footprint.clone(), o.height, o.class))
            .collect();
        for (_, actor) in state.active_actors() {
            let (_, _, h) = actor.kind.dimensions();
            prisms.push(Prism::new(actor.footprint().to_vec(), h, actor.kind.class_id()));
        }
        let pole = |p: Vec2, (side, h): (f64, f64), class| {
            Prism::new(oriented_rect(p, Vec2::new(1.0, 0.0), side, side).to_vec(), h, class)
        };
        for tl in &world.map.traffic_lights {
            prisms.push(pole(tl.position, LIGHT_POLE, classes::TRAFFIC_LIGHT));
        }
        for s in &world.map.stop_signs {
            prisms.push(pole(s.position, SIGN_POLE, classes::TRAFFIC_SIGN));
        }
        RenderScene {
            world,
            prisms,
            road_bounds: world.map.roads.iter().map(|p| bounds(p)).collect(),
            sidewalk_bounds: world.map.sidewalks.iter().map(|p| bounds(p)).collect(),
        }
    }

    /// Class of the ground surface at `p`.
    pub fn ground_class(&self, p: Vec2) -> u8 {
        let map = &self.world.map;
        let half = 0.5 * map.marking_width;
        for line in &map.markings {
            for w in line.windows(2) {
                let t = segment_param(p, w[0], w[1]);
                if p.dist(w[0] + (w[1] - w[0]) * t) <= half {
                    return classes::ROAD_LANE;
                }
            }
        }
        let within = |(lo, hi): &(Vec2, Vec2)| p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
        for (poly, b) in map.sidewalks.iter().zip(&self.sidewalk_bounds) {
            if within(b) && point_in_polygon(p, poly) {
                return classes::SIDEWALK;
            }
        }
        for (poly, b) in map.roads.iter().zip(&self.road_bounds) {
            if within(b) && point_in_polygon(p, poly) {
                return classes::ROAD;
            }
        }
        map.ground_class
    }

    /// Nearest hit `(t, class)` along `origin + t·dir`, or `None` when the
    /// ray escapes.
    pub fn trace(&self, origin: [f64; 3], dir: [f64; 3]) -> Option<(f64, u8)> {
        let mut best: Option<(f64, u8)> = None;
        if dir[2] < 0.0 {
            let t = -origin[2] / dir[2];
            let p = Vec2::new(origin[0] + t * dir[0], origin[1] + t * dir[1]);
            best = Some((t, self.ground_class(p)));
        }
        for prism in &self.prisms {
            if let Some(t) = prism.entry(origin, dir) {
                if best.is_none_or(|(bt, _)| t < bt) {
                    best = Some((t, prism.class));
                }
            }
        }
        best
    }
}

/// Camera origin and basis `(origin, forward, right, down)` in world 3D.
fn camera_frame(cam: &CameraIntrinsics, pose: &Pose) -> ([f64; 3], [f64; 3], [f64; 3], [f64; 3]) {
    let f = pose.forward();
    let r = pose.right();
    let c = pose.position() + f * cam.mount_forward + r * cam.mount_lateral;
    let (sp, cp) = math::sin_cos_deg(cam.pitch_deg);
    let forward = [f.x * cp, f.y * cp, -sp];
    let down = [f.x * sp, f.y * sp, -cp];
    ([c.x, c.y, cam.mount_height], forward, [r.x, r.y, 0.0], down)
}

/// Trace one pixel of the full render frame. Returns planar depth (distance
/// along the optical axis, clamped to the max range) and class; rays that
/// escape return `(max_range, Sky)`.
pub fn render_pixel(scene: &RenderScene<'_>, cam: &CameraIntrinsics, pose: &Pose, row: usize, col: usize) -> (f64, u8) {
    let (ox, oy) = cam.crop_offset();
    let (origin, f, r, d) = camera_frame(cam, pose);
    trace_pixel(scene, cam, origin, f, r, d, row as f64 - oy as f64, col as f64 - ox as f64)
}

#[allow(clippy::too_many_arguments)]
#[inline]
fn trace_pixel(
    scene: &RenderScene<'_>,
    cam: &CameraIntrinsics,
    origin: [f64; 3],
    f: [f64; 3],
    r: [f64; 3],
    d: [f64; 3],
    v_roi: f64,
    u_roi: f64,
) -> (f64, u8) {
    let a = (u_roi - cam.cx) / cam.fx;
    let b = (v_roi - cam.cy) / cam.fx;
    let dir = [
        f[0] + a * r[0] + b * d[0],
        f[1] + a * r[1] + b * d[1],
        f[2] + a * r[2] + b * d[2],
    ];
    match scene.trace(origin, dir) {
        Some((t, class)) if t <= cam.max_range => (t, class),
        _ => (cam.max_range, classes::SKY),
    }
}

/// Render rows `rows` of the region of interest into `depth`/`sem`, which
/// hold exactly those rows.
pub fn render_roi_rows(
    scene: &RenderScene<'_>,
    cam: &CameraIntrinsics,
    pose: &Pose,
    rows: core::ops::Range<usize>,
    depth: &mut [f64],
    sem: &mut [u8],
) {
    let (origin, f, r, d) = camera_frame(cam, pose);
    let w = cam.width;
    for (k, row) in rows.enumerate() {
        for col in 0..w {
            let (t, c) = trace_pixel(scene, cam, origin, f, r, d, row as f64, col as f64);
            depth[k * w + col] = t;
            sem[k * w + col] = c;
        }
    }
}

/// Render only the region of interest. Pixels are independent, so this is
/// bit-identical to cropping [`render_full`].
pub fn render_roi(scene: &RenderScene<'_>, cam: &CameraIntrinsics, pose: &Pose) -> (DepthMap, SemanticImage) {
    let mut depth = alloc::vec![0.0; cam.width * cam.height];
    let mut sem = alloc::vec![0u8; cam.width * cam.height];
    render_roi_rows(scene, cam, pose, 0..cam.height, &mut depth, &mut sem);
    (
        DepthMap::from_vec(cam.width, cam.height, depth),
        SemanticImage::from_vec(cam.width, cam.height, sem),
    )
}

/// Render the full `render_width × render_height` frame.
pub fn render_full(scene: &RenderScene<'_>, cam: &CameraIntrinsics, pose: &Pose) -> (DepthMap, SemanticImage) {
    let (ox, oy) = cam.crop_offset();
    let (origin, f, r, d) = camera_frame(cam, pose);
    let (w, h) = (cam.render_width, cam.render_height);
    let mut depth = alloc::vec![0.0; w * h];
    let mut sem = alloc::vec![0u8; w * h];
    for row in 0..h {
        for col in 0..w {
            let (t, c) = trace_pixel(scene, cam, origin, f, r, d, row as f64 - oy as f64, col as f64 - ox as f64);
            depth[row * w + col] = t;
            sem[row * w + col] = c;
        }
    }
    (DepthMap::from_vec(w, h, depth), SemanticImage::from_vec(w, h, sem))
}

/// Render the camera on the ego at full resolution and crop the central
/// 256×256 region of interest.
pub fn render_depth_semantic(world: &World, state: &WorldState, cam: &CameraIntrinsics) -> (DepthMap, SemanticImage) {
    let scene = RenderScene::new(world, state);
    let (depth, sem) = render_full(&scene, cam, &state.ego.pose);
    (depth.crop_center(cam.width, cam.height), sem.crop_center(cam.width, cam.height))
}

/// Pluggable region-of-interest renderer, so hosts can parallelize.
pub trait Renderer {
    fn render(&self, scene: &RenderScene<'_>, cam: &CameraIntrinsics, pose: &Pose) -> (DepthMap, SemanticImage);
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SequentialRenderer;

impl Renderer for SequentialRenderer {
    fn render(&self, scene: &RenderScene<'_>, cam: &CameraIntrinsics, pose: &Pose) -> (DepthMap, SemanticImage) {
        render_roi(scene, cam, pose)
    }
}
