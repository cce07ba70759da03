//! Route scoring (completion, infractions, termination) and offline
//! task-wise metrics.

mod driving;
mod infractions;
mod ledger;
mod metrics;
mod progress;
mod termination;
mod trace;

pub use driving::{driving_score, score_trace, Aggregate, RouteResult, RouteScorer, ScoringParams};
pub use infractions::{detect_infractions, InfractionMonitor, COLLISION_DEDUP_S};
pub use ledger::{infraction_penalty, InfractionEvent, InfractionKind, InfractionLedger, PenaltyTable};
pub use metrics::{
    accuracy, class_iou, iou, mae, seg_loss, total_loss, waypoint_mae, ControlMae, MetricReport, TaskLosses, SEG_EPS,
};
pub use progress::{route_completion, ProgressMonitor, GOAL_RADIUS};
pub use termination::{check_termination, TerminationMonitor, TerminationParams, TerminationReason};
pub use trace::{ActorSnapshot, TraceSample};
