use alloc::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::progress::ProgressMonitor;
use super::trace::TraceSample;
use crate::geom::Vec2;
use crate::world::{ReferencePath, World};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminationReason {
    /// Reached the final goal point.
    Completed,
    /// Strayed too far from the reference path.
    Deviation,
    /// Did not move for too long.
    Timeout,
    /// Ran out of the route's time budget.
    Blocked,
}

impl TerminationReason {
    pub fn as_str(self) -> &'static str {
        match self {
            TerminationReason::Completed => "completed",
            TerminationReason::Deviation => "deviation",
            TerminationReason::Timeout => "timeout",
            TerminationReason::Blocked => "blocked",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TerminationParams {
    /// Maximum distance from the reference path, meters.
    pub max_deviation: f64,
    /// Continuous inactivity that ends the run, seconds.
    pub inaction_s: f64,
    /// Sliding window over which displacement is measured, seconds.
    pub inaction_window_s: f64,
    /// Displacement over the window below which the ego counts as inactive.
    pub inaction_eps: f64,
    /// Fixed part of the time budget, seconds.
    pub budget_base_s: f64,
    /// Budget per meter of route, seconds.
    pub budget_per_m: f64,
}

impl Default for TerminationParams {
    fn default() -> Self {
        TerminationParams {
            max_deviation: 30.0,
            inaction_s: 180.0,
            inaction_window_s: 1.0,
            inaction_eps: 0.05,
            budget_base_s: 300.0,
            budget_per_m: 1.0,
        }
    }
}

impl TerminationParams {
    pub fn budget(&self, route_length: f64) -> f64 {
        self.budget_base_s + self.budget_per_m * route_length
    }
}

/// Incremental termination check. Precedence when several rules fire on the
/// same sample: completed, deviation, timeout, blocked.
#[derive(Debug, Clone)]
pub struct TerminationMonitor {
    params: TerminationParams,
    budget: f64,
    window: VecDeque<(f64, Vec2)>,
    first: Option<(f64, Vec2)>,
    idle_since: Option<f64>,
}

impl TerminationMonitor {
    pub fn new(params: TerminationParams, route_length: f64) -> Self {
        TerminationMonitor {
            params,
            budget: params.budget(route_length),
            window: VecDeque::new(),
            first: None,
            idle_since: None,
        }
    }

    /// Seconds of continuous inactivity up to the latest sample.
    pub fn idle_for(&self) -> f64 {
        match (self.idle_since, self.window.back()) {
            (Some(since), Some(&(t, _))) => t - since,
            _ => 0.0,
        }
    }

    /// `completed` and `deviation` come from the route-progress tracker for
    /// the same sample.
    pub fn observe(&mut self, s: &TraceSample, completed: bool, deviation: f64) -> Option<TerminationReason> {
        let p = s.pose.position();
        let first = *self.first.get_or_insert((s.t, p));
        self.window.push_back((s.t, p));
        let horizon = s.t - self.params.inaction_window_s;
        while self.window.len() > 1 && self.window[1].0 <= horizon {
            self.window.pop_front();
        }
        // Reference: latest sample at least one window old, or the first
        // sample while the run is younger than the window.
        let reference = if self.window[0].0 <= horizon { self.window[0] } else { first };
        if reference.1.dist(p) < self.params.inaction_eps {
            self.idle_since.get_or_insert(reference.0);
        } else {
            self.idle_since = None;
        }

        if completed {
            Some(TerminationReason::Completed)
        } else if deviation > self.params.max_deviation {
            Some(TerminationReason::Deviation)
        } else if self.idle_for() >= self.params.inaction_s {
            Some(TerminationReason::Timeout)
        } else if s.t >= self.budget {
            Some(TerminationReason::Blocked)
        } else {
            None
        }
    }
}

/// First termination reason along a trace, if any rule fires.
pub fn check_termination(
    world: &World,
    path: &ReferencePath,
    trace: &[TraceSample],
    params: &TerminationParams,
) -> Option<TerminationReason> {
    let first = trace.first()?;
    let mut progress = ProgressMonitor::new(world, path.clone(), first.pose.position());
    let mut term = TerminationMonitor::new(*params, path.length());
    trace.iter().find_map(|s| {
        progress.observe(s);
        term.observe(s, progress.completed(), progress.deviation())
    })
}
