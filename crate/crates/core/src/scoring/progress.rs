use super::trace::TraceSample;
use crate::world::{ReferencePath, RouteTracker, World};

/// The route counts as finished once the ego is this close to the final goal
/// point (and has progressed to within the same distance of the end).
pub const GOAL_RADIUS: f64 = 2.0;

/// Incremental route-completion tracker. Progress made while the ego center
/// is off the road does not count.
#[derive(Debug, Clone)]
pub struct ProgressMonitor<'w> {
    world: &'w World,
    tracker: RouteTracker,
    offroad_progress: f64,
    completed: bool,
    deviation: f64,
}

impl<'w> ProgressMonitor<'w> {
    pub fn new(world: &'w World, path: ReferencePath, start: crate::geom::Vec2) -> Self {
        ProgressMonitor {
            world,
            tracker: RouteTracker::new(path, start),
            offroad_progress: 0.0,
            completed: false,
            deviation: 0.0,
        }
    }

    pub fn observe(&mut self, s: &TraceSample) {
        let rear = s.pose.position();
        let before = self.tracker.progress();
        self.tracker.update(rear);
        let gained = self.tracker.progress() - before;
        let center = rear + s.pose.forward() * self.world.vehicle.body_offset();
        if !self.world.map.is_on_road(center) {
            self.offroad_progress += gained;
        }
        let path = self.tracker.path();
        self.deviation = path.project(rear).distance;
        let len = path.length();
        if !self.completed && rear.dist(path.end()) <= GOAL_RADIUS && self.tracker.progress() >= len - GOAL_RADIUS {
            self.completed = true;
        }
    }

    pub fn progress(&self) -> f64 {
        self.tracker.progress()
    }

    pub fn tracker(&self) -> &RouteTracker {
        &self.tracker
    }

    pub fn completed(&self) -> bool {
        self.completed
    }

    /// Distance from the rear axle to the nearest point of the path at the
    /// last sample.
    pub fn deviation(&self) -> f64 {
        self.deviation
    }

    pub fn offroad_progress(&self) -> f64 {
        self.offroad_progress
    }

    /// Route completion in percent.
    pub fn route_completion(&self) -> f64 {
        let len = self.tracker.path().length();
        let done = if self.completed { len } else { self.tracker.progress() };
        (100.0 * (done - self.offroad_progress) / len).clamp(0.0, 100.0)
    }
}

/// Batch route completion of a trace, percent.
pub fn route_completion(world: &World, path: &ReferencePath, trace: &[TraceSample]) -> f64 {
    let Some(first) = trace.first() else {
        return 0.0;
    };
    let mut m = ProgressMonitor::new(world, path.clone(), first.pose.position());
    trace.iter().for_each(|s| m.observe(s));
    m.route_completion()
}
