use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use super::types::VehicularControls;
use crate::{Error, Result};

/// Minimum throttle for an agent to count as wanting to drive.
pub const THROTTLE_THRESHOLD: f64 = 0.2;

/// Task loss weights `α_1..α_7` (segmentation, traffic light, stop sign,
/// steering, throttle, brake, waypoints).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LossWeights(pub [f64; 7]);

impl Default for LossWeights {
    fn default() -> Self {
        LossWeights([1.0; 7])
    }
}

impl LossWeights {
    pub fn scaled(self, c: f64) -> Self {
        LossWeights(self.0.map(|a| a * c))
    }
}

/// Blend weights: row 0 for the MLP agent, row 1 for the PID agent; columns
/// steering, throttle, brake.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ControlWeights(pub [[f64; 3]; 2]);

impl Default for ControlWeights {
    fn default() -> Self {
        ControlWeights([[0.5; 3]; 2])
    }
}

/// Derive blend weights from the control-task loss weights, each relative to
/// the waypoint loss weight.
pub fn compute_beta(alpha: &LossWeights) -> Result<ControlWeights> {
    let a = &alpha.0;
    if a.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::DegenerateLossWeights("loss weights must be finite and non-negative"));
    }
    let w = a[6];
    let ratio = |v: f64, which| {
        let den = v + w;
        if den > 0.0 {
            Ok(v / den)
        } else {
            Err(Error::DegenerateLossWeights(which))
        }
    };
    let b0 = ratio(a[3], "steering and waypoint weights sum to zero")?;
    let b1 = ratio(a[4], "throttle and waypoint weights sum to zero")?;
    let b2 = ratio(a[5], "brake and waypoint weights sum to zero")?;
    Ok(ControlWeights([[b0, b1, b2], [1.0 - b0, 1.0 - b1, 1.0 - b2]]))
}

/// Which arm of the fusion rule produced the controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FusionBranch {
    Blend,
    MlpOnly,
    PidOnly,
    Brake,
}

/// Four-way fusion of the two agents keyed on which of them clears the
/// throttle threshold. Only the last arm brakes, treating the PID agent as
/// braking fully.
pub fn fuse_controls(mlp: VehicularControls, pid: VehicularControls, beta: &ControlWeights) -> (VehicularControls, FusionBranch) {
    let b = &beta.0;
    let mlp_on = mlp.throttle >= THROTTLE_THRESHOLD;
    let pid_on = pid.throttle >= THROTTLE_THRESHOLD;
    match (mlp_on, pid_on) {
        (true, true) => (
            VehicularControls {
                steering: b[0][0] * mlp.steering + b[1][0] * pid.steering,
                throttle: b[0][1] * mlp.throttle + b[1][1] * pid.throttle,
                brake: 0.0,
            },
            FusionBranch::Blend,
        ),
        (true, false) => (
            VehicularControls {
                brake: 0.0,
                ..mlp
            },
            FusionBranch::MlpOnly,
        ),
        (false, true) => (
            VehicularControls {
                brake: 0.0,
                ..pid
            },
            FusionBranch::PidOnly,
        ),
        (false, false) => (braking(mlp, beta), FusionBranch::Brake),
    }
}

fn braking(mlp: VehicularControls, beta: &ControlWeights) -> VehicularControls {
    let b = &beta.0;
    VehicularControls {
        steering: 0.0,
        throttle: 0.0,
        brake: b[0][2] * mlp.brake + b[1][2] * 1.0,
    }
}

/// Control policy used to turn the two agents' outputs into final controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum PolicyVariant {
    /// The four-way fusion rule.
    #[default]
    Proposed,
    /// MLP agent alone; full stop below the throttle threshold.
    Mlp,
    /// PID agent alone; full stop below the throttle threshold.
    Pid,
    /// Drive only when both agents clear the threshold.
    Both,
    /// Fusion rule with the semantic depth cloud withheld from the features.
    NoSdc,
}

impl PolicyVariant {
    pub const ALL: [PolicyVariant; 5] = [
        PolicyVariant::Proposed,
        PolicyVariant::Mlp,
        PolicyVariant::Pid,
        PolicyVariant::Both,
        PolicyVariant::NoSdc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PolicyVariant::Proposed => "proposed",
            PolicyVariant::Mlp => "mlp",
            PolicyVariant::Pid => "pid",
            PolicyVariant::Both => "both",
            PolicyVariant::NoSdc => "no-sdc",
        }
    }

    /// Whether the feature vector may include the semantic depth cloud.
    pub fn uses_sdc(self) -> bool {
        self != PolicyVariant::NoSdc
    }

    pub fn apply(self, mlp: VehicularControls, pid: VehicularControls, beta: &ControlWeights) -> (VehicularControls, FusionBranch) {
        let gate = |c: VehicularControls, branch| {
            if c.throttle >= THROTTLE_THRESHOLD {
                (VehicularControls { brake: 0.0, ..c }, branch)
            } else {
                (VehicularControls::FULL_STOP, FusionBranch::Brake)
            }
        };
        match self {
            PolicyVariant::Proposed | PolicyVariant::NoSdc => fuse_controls(mlp, pid, beta),
            PolicyVariant::Mlp => gate(mlp, FusionBranch::MlpOnly),
            PolicyVariant::Pid => gate(pid, FusionBranch::PidOnly),
            PolicyVariant::Both => match fuse_controls(mlp, pid, beta) {
                out @ (_, FusionBranch::Blend) => out,
                _ => (braking(mlp, beta), FusionBranch::Brake),
            },
        }
    }
}

impl fmt::Display for PolicyVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolicyVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: alloc::string::String = s.chars().filter(|c| *c != '-' && *c != '_').flat_map(char::to_lowercase).collect();
        match norm.as_str() {
            "proposed" => Ok(PolicyVariant::Proposed),
            "mlp" => Ok(PolicyVariant::Mlp),
            "pid" => Ok(PolicyVariant::Pid),
            "both" => Ok(PolicyVariant::Both),
            "nosdc" => Ok(PolicyVariant::NoSdc),
            _ => Err(Error::UnknownVariant(s.into())),
        }
    }
}
