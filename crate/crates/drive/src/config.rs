//! TOML map files, route sets and run configurations.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use sdc_core::control::{ControlWeights, FeatureSource, LossWeights, PidGains, PolicyVariant};
use sdc_core::episode::{AgentInputs, Driver, EpisodeConfig};
use sdc_core::scoring::ScoringParams;
use sdc_core::sensor::{CameraIntrinsics, WeatherPreset, WEATHER_PRESETS};
use sdc_core::world::{ExpertParams, NpcScript, RouteSpec, ScenarioConfig, ScenarioKind, VehicleParams, World, WorldMap};

use crate::demo;
use crate::{DriveError, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Prefix selecting a bundled map instead of a file, e.g. `demo:straight_two_turn`.
pub const DEMO_PREFIX: &str = "demo:";

/// Seed stride between weathers, so every (weather, repeat) pair gets its own seed.
const WEATHER_SEED_STRIDE: u64 = 1000;

fn read_toml<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(DriveError::io(path))?;
    toml::from_str(&text).map_err(|source| DriveError::Toml {
        path: path.to_path_buf(),
        source,
    })
}

fn check_schema(path: &Path, found: u32) -> Result<()> {
    if found != SCHEMA_VERSION {
        return Err(DriveError::format(
            path,
            format!("schema_version {found} is not supported (expected {SCHEMA_VERSION})"),
        ));
    }
    Ok(())
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

/// A world: static map, ego vehicle, scripted actors and the routes driven on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapFile {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    #[serde(default)]
    pub vehicle: VehicleParams,
    pub map: WorldMap,
    #[serde(default)]
    pub scripts: Vec<NpcScript>,
    #[serde(default)]
    pub routes: Vec<RouteSpec>,
}

impl MapFile {
    pub fn load(path: &Path) -> Result<Self> {
        let file: MapFile = read_toml(path)?;
        check_schema(path, file.schema_version)?;
        Ok(file)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("map files serialize to TOML")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_toml()).map_err(DriveError::io(path))
    }

    pub fn world(&self) -> Result<World> {
        for r in &self.routes {
            r.validate()?;
        }
        Ok(World::new(self.map.clone(), self.scripts.clone(), self.vehicle)?)
    }

    /// Load `reference`, which is either a file path or `demo:<name>`.
    pub fn resolve(reference: &str) -> Result<Self> {
        match reference.strip_prefix(DEMO_PREFIX) {
            Some(name) => demo::by_name(name).ok_or_else(|| {
                DriveError::Config(format!("unknown demo map `{name}` (known: {})", demo::NAMES.join(", ")))
            }),
            None => MapFile::load(Path::new(reference)),
        }
    }
}

/// Extra routes for a map, kept in their own file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteSet {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub routes: Vec<RouteSpec>,
}

impl RouteSet {
    pub fn load(path: &Path) -> Result<Self> {
        let set: RouteSet = read_toml(path)?;
        check_schema(path, set.schema_version)?;
        Ok(set)
    }
}

/// Everything needed to reproduce an evaluation run. Two runs with equal
/// configurations produce byte-identical outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    /// Map file path or `demo:<name>`.
    pub map: String,
    pub route_sets: Vec<PathBuf>,
    /// Route names to drive; empty drives all of them.
    pub routes: Vec<String>,
    pub scenario: ScenarioKind,
    pub driver: Driver,
    pub variant: PolicyVariant,
    pub inputs: AgentInputs,
    pub features: FeatureSource,
    pub weights: Option<PathBuf>,
    /// Weather preset names; empty selects the scenario default.
    pub weathers: Vec<String>,
    pub seed: u64,
    /// Repeats per (route, weather); the scenario default when absent.
    pub repeats: Option<u32>,
    pub output: Option<PathBuf>,
    pub dt: f64,
    pub log_period: f64,
    pub log_frames: bool,
    /// Also store each logged frame's occupancy tensor.
    pub write_sdc: bool,
    pub max_duration_s: Option<f64>,
    pub beta: ControlWeights,
    pub alpha: LossWeights,
    pub pid: PidGains,
    pub expert: ExpertParams,
    pub camera: CameraIntrinsics,
    pub scoring: ScoringParams,
    /// Worker threads; rayon's default when absent.
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let episode = EpisodeConfig::default();
        RunConfig {
            schema_version: SCHEMA_VERSION,
            map: format!("{DEMO_PREFIX}straight_two_turn"),
            route_sets: Vec::new(),
            routes: Vec::new(),
            scenario: ScenarioKind::OneWeatherNormal,
            driver: Driver::Agent,
            variant: PolicyVariant::Proposed,
            inputs: AgentInputs::Oracle,
            features: FeatureSource::Oracle,
            weights: None,
            weathers: Vec::new(),
            seed: 0,
            repeats: None,
            output: None,
            dt: episode.dt,
            log_period: 0.5,
            log_frames: false,
            write_sdc: false,
            max_duration_s: None,
            beta: episode.beta,
            alpha: LossWeights::default(),
            pid: episode.pid,
            expert: episode.expert,
            camera: episode.camera,
            scoring: episode.scoring,
            threads: None,
        }
    }
}

impl RunConfig {
    /// Load a run configuration; relative paths inside it are taken relative
    /// to the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg: RunConfig = read_toml(path)?;
        check_schema(path, cfg.schema_version)?;
        let base = path.parent().unwrap_or(Path::new(""));
        let join = |p: &Path| if p.is_absolute() { p.to_path_buf() } else { base.join(p) };
        if !cfg.map.starts_with(DEMO_PREFIX) {
            cfg.map = join(Path::new(&cfg.map)).to_string_lossy().into_owned();
        }
        cfg.route_sets = cfg.route_sets.iter().map(|p| join(p)).collect();
        cfg.weights = cfg.weights.as_deref().map(join);
        cfg.output = cfg.output.as_deref().map(join);
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configs serialize to TOML")
    }

    /// Validate everything that can be checked without touching the disk.
    pub fn validate(&self) -> Result<()> {
        self.steps_per_log()?;
        for w in self.weathers()? {
            WeatherPreset::by_name(&w)?;
        }
        if self.repeats() == 0 {
            return Err(DriveError::Config("repeats must be at least 1".into()));
        }
        if self.threads == Some(0) {
            return Err(DriveError::Config("threads must be at least 1".into()));
        }
        if let Some(d) = self.max_duration_s {
            if !d.is_finite() || d <= 0.0 {
                return Err(DriveError::Config("max_duration_s must be positive".into()));
            }
        }
        if self.driver == Driver::Agent && self.inputs == AgentInputs::Network && self.weights.is_none() {
            return Err(DriveError::Config("network inputs need a weights file".into()));
        }
        self.camera.validate()?;
        Ok(())
    }

    pub fn steps_per_log(&self) -> Result<u64> {
        let sc = ScenarioConfig {
            kind: self.scenario,
            weather: "ClearNoon".into(),
            seed: self.seed,
            dt: self.dt,
            log_period: self.log_period,
        };
        Ok(sc.steps_per_log()?)
    }

    pub fn weathers(&self) -> Result<Vec<String>> {
        if !self.weathers.is_empty() {
            return Ok(self.weathers.clone());
        }
        Ok(if self.scenario.all_weathers() {
            WEATHER_PRESETS.iter().map(|p| p.name.to_string()).collect()
        } else {
            vec!["ClearNoon".to_string()]
        })
    }

    pub fn repeats(&self) -> u32 {
        self.repeats.unwrap_or(if self.scenario.all_weathers() { 1 } else { 3 })
    }

    /// Seed of repeat `repeat` under the `weather_index`-th weather.
    pub fn episode_seed(&self, weather_index: usize, repeat: u32) -> u64 {
        self.seed
            .wrapping_add(weather_index as u64 * WEATHER_SEED_STRIDE)
            .wrapping_add(repeat as u64)
    }

    /// The map plus every route to drive, in configuration order.
    pub fn load_map(&self) -> Result<(MapFile, Vec<RouteSpec>)> {
        let file = MapFile::resolve(&self.map)?;
        let mut all = file.routes.clone();
        for p in &self.route_sets {
            all.extend(RouteSet::load(p)?.routes);
        }
        let routes = if self.routes.is_empty() {
            all
        } else {
            self.routes
                .iter()
                .map(|name| {
                    all.iter()
                        .find(|r| &r.name == name)
                        .cloned()
                        .ok_or_else(|| DriveError::Config(format!("route `{name}` not found")))
                })
                .collect::<Result<_>>()?
        };
        if routes.is_empty() {
            return Err(DriveError::Config("no routes to drive".into()));
        }
        Ok((file, routes))
    }

    pub fn episode_config(&self, weather: &str, seed: u64) -> Result<EpisodeConfig> {
        Ok(EpisodeConfig {
            dt: self.dt,
            steps_per_log: self.steps_per_log()?,
            driver: self.driver,
            inputs: self.inputs,
            variant: self.variant,
            features: self.features,
            beta: self.beta,
            pid: self.pid,
            expert: self.expert,
            camera: self.camera,
            weather: weather.to_string(),
            seed,
            adversarial: self.scenario.is_adversarial(),
            scoring: self.scoring,
            max_duration_s: self.max_duration_s,
            log_frames: self.log_frames,
            keep_trace: self.log_frames,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips_through_toml() {
        let cfg = RunConfig::default();
        let back: RunConfig = toml::from_str(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<RunConfig>("mapp = \"x\"").is_err());
    }

    #[test]
    fn scenario_defaults() {
        let mut cfg = RunConfig::default();
        assert_eq!(cfg.weathers().unwrap(), vec!["ClearNoon".to_string()]);
        assert_eq!(cfg.repeats(), 3);
        cfg.scenario = ScenarioKind::AllWeatherAdversarial;
        assert_eq!(cfg.weathers().unwrap().len(), 14);
        assert_eq!(cfg.repeats(), 1);
        assert!(cfg.episode_config("ClearNoon", 0).unwrap().adversarial);
    }

    #[test]
    fn bad_log_period_is_rejected() {
        let cfg = RunConfig {
            log_period: 0.33,
            ..RunConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn seeds_are_distinct_per_weather_and_repeat() {
        let cfg = RunConfig::default();
        let mut seen = std::collections::BTreeSet::new();
        for w in 0..14 {
            for r in 0..3 {
                assert!(seen.insert(cfg.episode_seed(w, r)));
            }
        }
    }
}
