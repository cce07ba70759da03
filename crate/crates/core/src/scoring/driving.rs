use alloc::string::String;

use serde::{Deserialize, Serialize};

use super::infractions::InfractionMonitor;
use super::ledger::{infraction_penalty, InfractionLedger, PenaltyTable};
use super::progress::ProgressMonitor;
use super::termination::{TerminationMonitor, TerminationParams, TerminationReason};
use super::trace::TraceSample;
use crate::math::sqrt;
use crate::world::{ReferencePath, World};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ScoringParams {
    pub penalties: PenaltyTable,
    pub termination: TerminationParams,
}

/// Outcome of one route.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteResult {
    pub route: String,
    /// Route completion, percent.
    pub rc: f64,
    /// Infraction penalty.
    pub ip: f64,
    /// Driving score, percent.
    pub ds: f64,
    /// `None` when the episode was cut off before any rule fired.
    pub termination: Option<TerminationReason>,
    pub ledger: InfractionLedger,
    pub duration_s: f64,
    pub driven_m: f64,
}

impl RouteResult {
    pub fn new(
        route: String,
        rc: f64,
        ledger: InfractionLedger,
        table: &PenaltyTable,
        termination: Option<TerminationReason>,
    ) -> Self {
        let ip = infraction_penalty(&ledger, table);
        RouteResult {
            route,
            rc,
            ip,
            ds: rc * ip,
            termination,
            ledger,
            duration_s: 0.0,
            driven_m: 0.0,
        }
    }
}

/// Online scorer: feed every simulation step; stop when it reports a
/// termination reason.
#[derive(Debug, Clone)]
pub struct RouteScorer<'w> {
    params: ScoringParams,
    infractions: InfractionMonitor<'w>,
    progress: ProgressMonitor<'w>,
    termination: TerminationMonitor,
    reason: Option<TerminationReason>,
    last: Option<TraceSample>,
    driven_m: f64,
}

impl<'w> RouteScorer<'w> {
    pub fn new(world: &'w World, path: &ReferencePath, start: crate::geom::Vec2, params: ScoringParams) -> Self {
        RouteScorer {
            params,
            infractions: InfractionMonitor::new(world),
            progress: ProgressMonitor::new(world, path.clone(), start),
            termination: TerminationMonitor::new(params.termination, path.length()),
            reason: None,
            last: None,
            driven_m: 0.0,
        }
    }

    pub fn observe(&mut self, s: &TraceSample) -> Option<TerminationReason> {
        if self.reason.is_some() {
            return self.reason;
        }
        if let Some(prev) = &self.last {
            self.driven_m += prev.pose.position().dist(s.pose.position());
        }
        self.infractions.observe(s);
        self.progress.observe(s);
        self.reason = self.termination.observe(s, self.progress.completed(), self.progress.deviation());
        self.last = Some(s.clone());
        self.reason
    }

    pub fn progress(&self) -> &ProgressMonitor<'w> {
        &self.progress
    }

    pub fn reason(&self) -> Option<TerminationReason> {
        self.reason
    }

    pub fn finish(self, route: String) -> RouteResult {
        let duration = self.last.as_ref().map_or(0.0, |s| s.t);
        let mut r = RouteResult::new(
            route,
            self.progress.route_completion(),
            self.infractions.into_ledger(),
            &self.params.penalties,
            self.reason,
        );
        r.duration_s = duration;
        r.driven_m = self.driven_m;
        r
    }
}

/// Score a stored trace. Replaying the trace of a live run reproduces the
/// live result exactly.
pub fn score_trace(world: &World, path: &ReferencePath, trace: &[TraceSample], params: ScoringParams, route: String) -> Result<RouteResult> {
    let first = trace.first().ok_or(Error::Empty("trace"))?;
    let mut scorer = RouteScorer::new(world, path, first.pose.position(), params);
    for s in trace {
        if scorer.observe(s).is_some() {
            break;
        }
    }
    Ok(scorer.finish(route))
}

/// Mean and population standard deviation of DS, RC and IP over results.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub n: usize,
    pub ds: f64,
    pub ds_std: f64,
    pub rc: f64,
    pub rc_std: f64,
    pub ip: f64,
    pub ip_std: f64,
}

fn mean_std(values: impl Iterator<Item = f64> + Clone, n: usize) -> (f64, f64) {
    let mean = values.clone().sum::<f64>() / n as f64;
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
    (mean, sqrt(var))
}

/// DS is the mean of per-route products, not the product of means.
pub fn driving_score(results: &[RouteResult]) -> Result<Aggregate> {
    let n = results.len();
    if n == 0 {
        return Err(Error::Empty("route results"));
    }
    let (ds, ds_std) = mean_std(results.iter().map(|r| r.ds), n);
    let (rc, rc_std) = mean_std(results.iter().map(|r| r.rc), n);
    let (ip, ip_std) = mean_std(results.iter().map(|r| r.ip), n);
    Ok(Aggregate {
        n,
        ds,
        ds_std,
        rc,
        rc_std,
        ip,
        ip_std,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scoring::InfractionKind;

    fn result(rc: f64, ip_events: &[(InfractionKind, u32)]) -> RouteResult {
        RouteResult::new(
            "r".into(),
            rc,
            InfractionLedger::from_counts(ip_events),
            &PenaltyTable::default(),
            Some(TerminationReason::Completed),
        )
    }

    #[test]
    fn aggregate_examples() {
        let a = driving_score(&[result(100.0, &[])]).unwrap();
        assert_eq!((a.ds, a.rc, a.ip), (100.0, 100.0, 1.0));
        let b = driving_score(&[result(50.0, &[(InfractionKind::CollisionPedestrian, 1)])]).unwrap();
        assert_eq!(b.ds, 25.0);
        let c = driving_score(&[result(100.0, &[]), result(0.0, &[])]).unwrap();
        assert_eq!((c.ds, c.ds_std), (50.0, 50.0));
        assert!(driving_score(&[]).is_err());
    }

    #[test]
    fn mean_of_products_differs_from_product_of_means() {
        let rs = [
            result(100.0, &[(InfractionKind::CollisionPedestrian, 1)]),
            result(20.0, &[]),
        ];
        let a = driving_score(&rs).unwrap();
        assert_eq!(a.ds, 35.0);
        assert_eq!(a.rc * a.ip, 45.0);
    }
}
