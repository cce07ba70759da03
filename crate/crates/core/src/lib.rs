//! Semantic depth cloud (SDC) driving pipeline.
//!
//! `sdc-core` holds every algorithm of the pipeline as pure, allocation-only
//! code so it can run without an operating system:
//!
//! * [`world`]: a deterministic 2.5D world (road polygons, extruded boxes,
//!   scripted actors, traffic lights, stop signs) stepped with a kinematic
//!   bicycle model, plus the privileged expert autopilot.
//! * [`sensor`]: pinhole depth/semantic raycaster, the 24-bit depth codec and
//!   weather noise.
//! * [`sdc`]: projection of (semantic, depth) images into the one-hot
//!   23×256×256 bird's-eye-view tensor, and marker rasterization.
//! * [`control`]: global→local transform, GRU waypoint predictor, MLP agent,
//!   PID agent and the fusion control policy.
//! * [`scoring`]: infractions, route completion, driving score, termination
//!   rules and task-wise metrics.
//! * [`episode`]: the closed-loop runner tying everything together.
//!
//! File formats, parallel rendering and the command-line harness live in the
//! `sdc-drive` crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod classes;
pub mod control;
pub mod episode;
mod error;
pub mod geom;
pub mod math;
pub mod scoring;
pub mod sdc;
pub mod sensor;
pub mod world;

pub use error::{Error, Result};
