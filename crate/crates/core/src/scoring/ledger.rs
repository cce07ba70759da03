use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::math::pow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfractionKind {
    CollisionPedestrian,
    CollisionVehicle,
    CollisionStatic,
    RedLight,
    StopSign,
}

impl InfractionKind {
    pub const ALL: [InfractionKind; 5] = [
        InfractionKind::CollisionPedestrian,
        InfractionKind::CollisionVehicle,
        InfractionKind::CollisionStatic,
        InfractionKind::RedLight,
        InfractionKind::StopSign,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InfractionKind::CollisionPedestrian => "collision_pedestrian",
            InfractionKind::CollisionVehicle => "collision_vehicle",
            InfractionKind::CollisionStatic => "collision_static",
            InfractionKind::RedLight => "red_light",
            InfractionKind::StopSign => "stop_sign",
        }
    }
}

/// Multiplicative penalty per infraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PenaltyTable {
    pub pedestrian: f64,
    pub vehicle: f64,
    pub static_object: f64,
    pub red_light: f64,
    pub stop_sign: f64,
}

impl Default for PenaltyTable {
    fn default() -> Self {
        PenaltyTable {
            pedestrian: 0.50,
            vehicle: 0.60,
            static_object: 0.65,
            red_light: 0.70,
            stop_sign: 0.80,
        }
    }
}

impl PenaltyTable {
    pub fn penalty(&self, kind: InfractionKind) -> f64 {
        match kind {
            InfractionKind::CollisionPedestrian => self.pedestrian,
            InfractionKind::CollisionVehicle => self.vehicle,
            InfractionKind::CollisionStatic => self.static_object,
            InfractionKind::RedLight => self.red_light,
            InfractionKind::StopSign => self.stop_sign,
        }
    }

    pub fn is_valid(&self) -> bool {
        InfractionKind::ALL.iter().all(|&k| {
            let p = self.penalty(k);
            p > 0.0 && p <= 1.0
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfractionEvent {
    pub kind: InfractionKind,
    pub t: f64,
    /// Actor, obstacle, light or stop-sign index involved.
    pub index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct InfractionLedger {
    pub events: Vec<InfractionEvent>,
    /// Distance driven with the ego center off the road, meters.
    pub offroad_m: f64,
}

impl InfractionLedger {
    /// Ledger with `n` events of each listed kind, all at `t = 0`.
    pub fn from_counts(counts: &[(InfractionKind, u32)]) -> Self {
        let mut ledger = InfractionLedger::default();
        for &(kind, n) in counts {
            for _ in 0..n {
                ledger.push(kind, 0.0, None);
            }
        }
        ledger
    }

    pub fn push(&mut self, kind: InfractionKind, t: f64, index: Option<usize>) {
        self.events.push(InfractionEvent { kind, t, index });
    }

    pub fn count(&self, kind: InfractionKind) -> u32 {
        self.events.iter().filter(|e| e.kind == kind).count() as u32
    }

    pub fn counts(&self) -> [(InfractionKind, u32); 5] {
        InfractionKind::ALL.map(|k| (k, self.count(k)))
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Ledger of two consecutive stretches of driving.
    pub fn concat(&self, other: &InfractionLedger) -> InfractionLedger {
        let mut events = self.events.clone();
        events.extend_from_slice(&other.events);
        InfractionLedger {
            events,
            offroad_m: self.offroad_m + other.offroad_m,
        }
    }
}

/// Start from 1 and multiply in each infraction's penalty once per
/// occurrence.
pub fn infraction_penalty(ledger: &InfractionLedger, table: &PenaltyTable) -> f64 {
    ledger
        .counts()
        .iter()
        .fold(1.0, |ip, &(kind, n)| ip * pow(table.penalty(kind), n as f64))
}
