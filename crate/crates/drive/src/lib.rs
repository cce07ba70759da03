//! Host-side harness for the `sdc-core` driving pipeline: file formats
//! (tensor container, weight bundles, drive logs, TOML configs), a
//! row-parallel renderer, bundled demo maps, scenario orchestration and
//! visualization. The `sdcdrive` binary wraps it in a CLI.

pub mod config;
pub mod demo;
pub mod drivelog;
mod error;
pub mod harness;
pub mod parallel;
pub mod tensor;
pub mod viz;
pub mod weights;

pub use error::{DriveError, Result};
