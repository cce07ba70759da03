use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::depth_codec::DEPTH_RANGE;
use super::grid::{DepthMap, SemanticImage};
use crate::classes;
use crate::{Error, Result};

/// Sensor-degradation parameters standing in for one weather condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeatherPreset {
    pub name: &'static str,
    /// Standard deviation of additive depth noise, meters.
    pub depth_sigma: f64,
    /// Per-pixel probability that a label is replaced by unlabeled.
    pub label_flip: f64,
    /// Per-pixel probability that a depth return is lost (reads max range).
    pub dropout: f64,
}

const fn preset(name: &'static str, depth_sigma: f64, label_flip: f64, dropout: f64) -> WeatherPreset {
    WeatherPreset {
        name,
        depth_sigma,
        label_flip,
        dropout,
    }
}

pub const WEATHER_PRESETS: [WeatherPreset; 14] = [
    preset("ClearNoon", 0.0, 0.0, 0.0),
    preset("ClearSunset", 0.02, 0.005, 0.0),
    preset("CloudyNoon", 0.03, 0.005, 0.0),
    preset("CloudySunset", 0.05, 0.01, 0.001),
    preset("WetNoon", 0.05, 0.01, 0.001),
    preset("WetSunset", 0.08, 0.02, 0.002),
    preset("MidRainyNoon", 0.15, 0.03, 0.004),
    preset("MidRainySunset", 0.2, 0.05, 0.005),
    preset("WetCloudyNoon", 0.08, 0.015, 0.002),
    preset("WetCloudySunset", 0.1, 0.03, 0.003),
    preset("HardRainNoon", 0.3, 0.06, 0.008),
    preset("HardRainSunset", 0.35, 0.08, 0.01),
    preset("SoftRainNoon", 0.1, 0.02, 0.002),
    preset("SoftRainSunset", 0.12, 0.03, 0.003),
];

impl WeatherPreset {
    pub fn by_name(name: &str) -> Result<WeatherPreset> {
        WEATHER_PRESETS
            .iter()
            .find(|p| p.name.eq_ignore_ascii_case(name))
            .copied()
            .ok_or_else(|| Error::UnknownWeather(name.into()))
    }

    pub fn is_valid(&self) -> bool {
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        self.depth_sigma >= 0.0 && self.depth_sigma.is_finite() && prob(self.label_flip) && prob(self.dropout)
    }

    pub fn is_identity(&self) -> bool {
        self.depth_sigma == 0.0 && self.label_flip == 0.0 && self.dropout == 0.0
    }
}

/// Corrupt depth and labels with the preset's noise model. Deterministic in
/// `seed`; the identity preset returns the inputs unchanged.
pub fn apply_weather(depth: &DepthMap, sem: &SemanticImage, preset: &WeatherPreset, seed: u64) -> (DepthMap, SemanticImage) {
    let mut depth = depth.clone();
    let mut sem = sem.clone();
    if preset.is_identity() {
        return (depth, sem);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for d in depth.as_mut_slice() {
        let noise: f64 = StandardNormal.sample(&mut rng);
        let dropped = rng.random::<f64>() < preset.dropout;
        *d = if dropped {
            DEPTH_RANGE
        } else {
            (*d + preset.depth_sigma * noise).clamp(0.0, DEPTH_RANGE)
        };
    }
    for c in sem.as_mut_slice() {
        if rng.random::<f64>() < preset.label_flip {
            *c = classes::UNLABELED;
        }
    }
    (depth, sem)
}
