use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::network::FEATURE_DIM;
use crate::sdc::{SdcTensor, SDC_CHANNELS};

/// Blocks per side when pooling the occupancy grid into features.
pub const POOL_BLOCKS: usize = 4;
const POOLED_LEN: usize = SDC_CHANNELS * POOL_BLOCKS * POOL_BLOCKS;

/// Where the network agent's 384-wide feature vector comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FeatureSource {
    /// Pooled occupancy grid, traffic-light/stop-sign bits and speed.
    #[default]
    Oracle,
    /// Seeded uniform noise, fresh per step.
    Random { seed: u64 },
}

/// Oracle encoding: per-channel occupancy over a 4×4 block partition of the
/// grid (368 values), then the traffic-light bit, stop-sign bit and speed
/// over 10 m/s, zero-padded to 384. Without a grid the pooled part is zero.
pub fn oracle_features(sdc: Option<&SdcTensor>, tl: f64, ss: f64, speed: f64) -> Vec<f64> {
    let mut f = vec![0.0; FEATURE_DIM];
    if let Some(sdc) = sdc {
        f[..POOLED_LEN].copy_from_slice(&sdc.pooled(POOL_BLOCKS));
    }
    f[POOLED_LEN] = tl;
    f[POOLED_LEN + 1] = ss;
    f[POOLED_LEN + 2] = speed / 10.0;
    f
}

/// Uniform `[0, 1)` features for step `step` of a run seeded with `seed`.
pub fn random_features(seed: u64, step: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(step);
    (0..FEATURE_DIM).map(|_| rng.random::<f64>()).collect()
}
