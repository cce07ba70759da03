//! Scenario orchestration: route × weather × repeat episodes on a rayon
//! pool, expert log generation, offline scoring and frame rendering.

use std::fs;
use std::path::{Path, PathBuf};

use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use sdc_core::control::{LossWeights, NetworkWeights};
use sdc_core::episode::{run_episode, Driver, EpisodeOutcome, EpisodeStats, FrameSink, NullSink};
use sdc_core::scoring::{driving_score, Aggregate, MetricReport, RouteResult};
use sdc_core::world::{DriveLogFrame, RouteSpec, World};

use crate::config::{RunConfig, SCHEMA_VERSION};
use crate::drivelog::{read_log, read_result, DriveLogWriter, LogMeta, RESULT_FILE};
use crate::parallel::ParallelRenderer;
use crate::viz::{frame_composite, save_png};
use crate::weights::load_weights;
use crate::{DriveError, Result};

pub const REPORT_FILE: &str = "report.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeReport {
    pub route: String,
    pub weather: String,
    pub repeat: u32,
    pub seed: u64,
    pub result: RouteResult,
    pub stats: EpisodeStats,
    /// Task-wise metrics over the episode's logged frames.
    pub metrics: Option<MetricReport>,
    /// Log directory, relative to the run output.
    pub log: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub map: String,
    pub scenario: String,
    pub driver: Driver,
    pub variant: String,
    pub episodes: Vec<EpisodeReport>,
    pub aggregate: Aggregate,
}

struct Job<'a> {
    route: &'a RouteSpec,
    weather: String,
    weather_index: usize,
    repeat: u32,
}

/// Writes frames to disk and keeps them for metrics.
struct Tee<'a> {
    writer: Option<&'a mut DriveLogWriter>,
    frames: Vec<DriveLogFrame>,
}

impl FrameSink for Tee<'_> {
    fn push(&mut self, frame: DriveLogFrame) {
        if let Some(w) = self.writer.as_deref_mut() {
            w.push(frame.clone());
        }
        self.frames.push(frame);
    }
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

fn episode_dir(route: &str, weather: &str, repeat: u32) -> PathBuf {
    PathBuf::from("episodes").join(sanitize(route)).join(weather).join(format!("r{repeat}"))
}

fn load_network(cfg: &RunConfig) -> Result<Option<NetworkWeights>> {
    match (&cfg.weights, cfg.driver, cfg.inputs) {
        (Some(path), Driver::Agent, sdc_core::episode::AgentInputs::Network) => {
            Ok(Some(NetworkWeights::from_bundle(&load_weights(path)?)?))
        }
        _ => Ok(None),
    }
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| DriveError::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn run_job(
    cfg: &RunConfig,
    world: &World,
    net: Option<&NetworkWeights>,
    alpha: &LossWeights,
    job: &Job<'_>,
) -> Result<EpisodeReport> {
    let seed = cfg.episode_seed(job.weather_index, job.repeat);
    let ep = cfg.episode_config(&job.weather, seed)?;
    let renderer = ParallelRenderer::default();
    let rel = episode_dir(&job.route.name, &job.weather, job.repeat);
    let mut writer = match (&cfg.output, cfg.log_frames) {
        (Some(out), true) => {
            let meta = LogMeta {
                map: world.map.name.clone(),
                route: job.route.name.clone(),
                weather: job.weather.clone(),
                seed,
                driver: format!("{:?}", cfg.driver).to_lowercase(),
                variant: cfg.variant.as_str().to_string(),
                log_period: cfg.log_period,
            };
            let table = cfg.write_sdc.then(|| cfg.camera.projection_table());
            Some(DriveLogWriter::create(&out.join(&rel), meta, table)?)
        }
        _ => None,
    };
    let (outcome, frames): (EpisodeOutcome, Vec<DriveLogFrame>) = if cfg.log_frames {
        let mut tee = Tee {
            writer: writer.as_mut(),
            frames: Vec::new(),
        };
        let outcome = run_episode(world, job.route, &ep, net, &renderer, &mut tee)?;
        (outcome, tee.frames)
    } else {
        (run_episode(world, job.route, &ep, net, &renderer, &mut NullSink)?, Vec::new())
    };
    let log = match writer {
        Some(w) => {
            w.finish(Some(&outcome.result), Some(&outcome.trace))?;
            Some(rel)
        }
        None => None,
    };
    let metrics = if frames.is_empty() {
        None
    } else {
        Some(MetricReport::from_frames(&frames, &frames, alpha)?)
    };
    info!(
        "{} / {} / r{}: DS {:.2} RC {:.2} IP {:.3} ({:?})",
        job.route.name, job.weather, job.repeat, outcome.result.ds, outcome.result.rc, outcome.result.ip, outcome.result.termination
    );
    Ok(EpisodeReport {
        route: job.route.name.clone(),
        weather: job.weather.clone(),
        repeat: job.repeat,
        seed,
        result: outcome.result,
        stats: outcome.stats,
        metrics,
        log,
    })
}

/// Drive every (route, weather, repeat) of `cfg`. Episodes run in parallel;
/// the report lists them in configuration order. With an output directory
/// the report is also written to `report.json` there.
pub fn run_scenario(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate()?;
    let (file, routes) = cfg.load_map()?;
    let world = file.world()?;
    let net = load_network(cfg)?;
    let weathers = cfg.weathers()?;
    let mut jobs = Vec::new();
    for route in &routes {
        for (weather_index, weather) in weathers.iter().enumerate() {
            for repeat in 0..cfg.repeats() {
                jobs.push(Job {
                    route,
                    weather: weather.clone(),
                    weather_index,
                    repeat,
                });
            }
        }
    }
    if let Some(out) = &cfg.output {
        fs::create_dir_all(out).map_err(DriveError::io(out))?;
    }
    let alpha = cfg.alpha;
    let episodes = with_pool(cfg.threads, || {
        jobs.par_iter()
            .map(|job| run_job(cfg, &world, net.as_ref(), &alpha, job))
            .collect::<Result<Vec<_>>>()
    })??;
    let results: Vec<RouteResult> = episodes.iter().map(|e| e.result.clone()).collect();
    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        map: file.map.name.clone(),
        scenario: cfg.scenario.as_str().to_string(),
        driver: cfg.driver,
        variant: cfg.variant.as_str().to_string(),
        episodes,
        aggregate: driving_score(&results)?,
    };
    if let Some(out) = &cfg.output {
        write_pretty(&out.join(REPORT_FILE), &report)?;
    }
    Ok(report)
}

/// Drive every route with the privileged expert and log all frames to
/// `cfg.output`, producing supervision logs.
pub fn generate_expert_logs(cfg: &RunConfig) -> Result<RunReport> {
    if cfg.output.is_none() {
        return Err(DriveError::Config("gen-logs needs an output directory".into()));
    }
    let cfg = RunConfig {
        driver: Driver::Expert,
        log_frames: true,
        ..cfg.clone()
    };
    run_scenario(&cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub frames: usize,
    pub metrics: MetricReport,
    /// Closed-loop result stored with the predicted log, if any.
    pub result: Option<RouteResult>,
}

/// Compare the prediction fields of the log in `pred_dir` with the
/// supervision fields of the log in `ref_dir`.
pub fn score_logs(pred_dir: &Path, ref_dir: &Path, alpha: &LossWeights) -> Result<ScoreReport> {
    let pred = read_log(pred_dir)?;
    let reference = read_log(ref_dir)?;
    let metrics = MetricReport::from_frames(&pred.frames, &reference.frames, alpha)?;
    let result = if pred_dir.join(RESULT_FILE).exists() {
        Some(read_result(pred_dir)?)
    } else {
        None
    };
    Ok(ScoreReport {
        frames: pred.frames.len(),
        metrics,
        result,
    })
}

/// Write one composite PNG per frame of the log in `log_dir`, every
/// `every`-th frame. Returns the written paths.
pub fn render_log(log_dir: &Path, out_dir: &Path, every: usize, cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let log = read_log(log_dir)?;
    fs::create_dir_all(out_dir).map_err(DriveError::io(out_dir))?;
    let table = cfg.camera.projection_table();
    log.frames
        .iter()
        .step_by(every.max(1))
        .map(|frame| {
            let path = out_dir.join(format!("frame_{:06}.png", frame.record.index));
            save_png(&frame_composite(frame, &table), &path)?;
            Ok(path)
        })
        .collect()
}

/// Drive the first configured route and weather once, keeping frames in
/// memory, and write composites of every `every`-th frame to `out_dir`.
pub fn render_episode(cfg: &RunConfig, out_dir: &Path, every: usize) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    let (file, routes) = cfg.load_map()?;
    let world = file.world()?;
    let net = load_network(cfg)?;
    let weather = cfg.weathers()?.remove(0);
    let ep = sdc_core::episode::EpisodeConfig {
        log_frames: true,
        ..cfg.episode_config(&weather, cfg.episode_seed(0, 0))?
    };
    let mut frames: Vec<DriveLogFrame> = Vec::new();
    run_episode(&world, &routes[0], &ep, net.as_ref(), &ParallelRenderer::default(), &mut frames)?;
    fs::create_dir_all(out_dir).map_err(DriveError::io(out_dir))?;
    let table = cfg.camera.projection_table();
    frames
        .par_iter()
        .step_by(every.max(1))
        .map(|frame| {
            let path = out_dir.join(format!("frame_{:06}.png", frame.record.index));
            save_png(&frame_composite(frame, &table), &path)?;
            Ok(path)
        })
        .collect()
}

fn write_pretty<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| DriveError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    fs::write(path, text).map_err(DriveError::io(path))
}
