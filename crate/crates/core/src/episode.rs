//! Closed-loop episode: sense, map, decide, fuse, step, score.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::control::{
    local_route_point, mlp_agent, oracle_features, oracle_waypoints, predict_waypoints, random_features, ControlWeights, FeatureSource,
    FusionBranch, LocalPoint, NetworkWeights, PidAgent, PidGains, PolicyVariant, Waypoints, ORACLE_SPACINGS,
};
use crate::geom::Vec2;
use crate::scoring::{RouteResult, RouteScorer, ScoringParams, TraceSample};
use crate::sdc::{project_sdc, SdcTensor};
use crate::sensor::{apply_weather, CameraIntrinsics, DepthMap, RenderScene, Renderer, SemanticImage, WeatherPreset};
use crate::world::{
    expert_decide, record_log, red_light_bit, step_world, stop_sign_bit, DriveLogFrame, ExpertParams, PipelineOutputs, Pose,
    ReferencePath, RouteSpec, World, WorldState,
};
use crate::{Error, Result};

/// Who drives the ego.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Driver {
    /// The agent stack under the configured policy variant.
    #[default]
    Agent,
    /// The privileged expert (used to generate supervision logs).
    Expert,
}

/// Source of the waypoints fed to the PID agent and of the MLP agent's
/// controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentInputs {
    /// Reference-path waypoints and the expert standing in for the MLP agent.
    #[default]
    Oracle,
    /// GRU waypoints and MLP controls from a weight bundle.
    Network,
}

/// Distance ahead of the ego at which the next route point is picked.
const ROUTE_POINT_AHEAD: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EpisodeConfig {
    pub dt: f64,
    pub steps_per_log: u64,
    pub driver: Driver,
    pub inputs: AgentInputs,
    pub variant: PolicyVariant,
    pub features: FeatureSource,
    pub beta: ControlWeights,
    pub pid: PidGains,
    pub expert: ExpertParams,
    pub camera: CameraIntrinsics,
    pub weather: String,
    pub seed: u64,
    pub adversarial: bool,
    pub scoring: ScoringParams,
    /// Hard cap on simulated time, in addition to the termination rules.
    pub max_duration_s: Option<f64>,
    pub log_frames: bool,
    pub keep_trace: bool,
}

impl Default for EpisodeConfig {
    fn default() -> Self {
        EpisodeConfig {
            dt: 0.05,
            steps_per_log: 10,
            driver: Driver::Agent,
            inputs: AgentInputs::Oracle,
            variant: PolicyVariant::Proposed,
            features: FeatureSource::Oracle,
            beta: ControlWeights::default(),
            pid: PidGains::default(),
            expert: ExpertParams::default(),
            camera: CameraIntrinsics::default(),
            weather: String::from("ClearNoon"),
            seed: 0,
            adversarial: false,
            scoring: ScoringParams::default(),
            max_duration_s: None,
            log_frames: false,
            keep_trace: false,
        }
    }
}

/// Receives log frames as they are produced.
pub trait FrameSink {
    fn push(&mut self, frame: DriveLogFrame);
}

/// Discards frames.
pub struct NullSink;

impl FrameSink for NullSink {
    fn push(&mut self, _frame: DriveLogFrame) {}
}

impl FrameSink for Vec<DriveLogFrame> {
    fn push(&mut self, frame: DriveLogFrame) {
        Vec::push(self, frame);
    }
}

/// Instrumentation counters of one episode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EpisodeStats {
    pub steps: u64,
    pub frames: u64,
    pub renders: u64,
    /// Occupancy grids built.
    pub sdc_built: u64,
    /// Occupancy grids that entered the network's features.
    pub sdc_consumed: u64,
    /// Steps per fusion branch: blend, MLP only, PID only, brake.
    pub branches: [u64; 4],
    pub clamp_events: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeOutcome {
    pub result: RouteResult,
    pub stats: EpisodeStats,
    pub trace: Vec<TraceSample>,
}

/// Initial ego pose: the first goal point, facing the second.
pub fn route_start_pose(route: &RouteSpec) -> Pose {
    let p = &route.goal_points;
    Pose::facing(p[0], p[1] - p[0])
}

fn frame_seed(seed: u64, step: u64) -> u64 {
    seed ^ step.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

struct Perception {
    depth: DepthMap,
    semantic_gt: SemanticImage,
    semantic_pred: SemanticImage,
    sdc: SdcTensor,
}

/// Run one route to termination (or the duration cap).
pub fn run_episode(
    world: &World,
    route: &RouteSpec,
    cfg: &EpisodeConfig,
    net: Option<&NetworkWeights>,
    renderer: &dyn Renderer,
    sink: &mut dyn FrameSink,
) -> Result<EpisodeOutcome> {
    route.validate()?;
    cfg.camera.validate()?;
    if !cfg.dt.is_finite() || cfg.dt <= 0.0 || cfg.steps_per_log == 0 {
        return Err(Error::InvalidConfig("dt and steps_per_log must be positive".into()));
    }
    let weather = WeatherPreset::by_name(&cfg.weather)?;
    let net = match (cfg.driver, cfg.inputs) {
        (Driver::Agent, AgentInputs::Network) => Some(net.ok_or(Error::MissingWeights("network agent inputs"))?),
        _ => None,
    };
    let path = route.reference_path();
    let table = cfg.camera.projection_table();
    let start = route_start_pose(route);
    let mut state = world.initial_state(start, cfg.adversarial);
    let mut scorer = RouteScorer::new(world, &path, start.position(), cfg.scoring);
    let mut pid = PidAgent::new(cfg.pid);
    let mut stats = EpisodeStats::default();
    let mut trace = Vec::new();
    let max_steps = cfg.max_duration_s.map(|d| crate::math::round_half_up(d / cfg.dt) as u64);

    let first = TraceSample::capture(world, &state);
    scorer.observe(&first);
    if cfg.keep_trace {
        trace.push(first);
    }

    let sense = |state: &WorldState, stats: &mut EpisodeStats| -> Perception {
        let scene = RenderScene::new(world, state);
        let (depth_gt, semantic_gt) = renderer.render(&scene, &cfg.camera, &state.ego.pose);
        let (depth, semantic_pred) = apply_weather(&depth_gt, &semantic_gt, &weather, frame_seed(cfg.seed, state.step));
        let sdc = project_sdc(&semantic_pred, &depth, &table);
        stats.renders += 1;
        stats.sdc_built += 1;
        Perception {
            depth,
            semantic_gt,
            semantic_pred,
            sdc,
        }
    };

    loop {
        let step = state.step;
        let log_now = cfg.log_frames && step.is_multiple_of(cfg.steps_per_log);
        let needs_features = net.is_some() && cfg.features == FeatureSource::Oracle && cfg.variant.uses_sdc();
        let perception = (log_now || needs_features).then(|| sense(&state, &mut stats));

        let pose = state.ego.pose;
        let speed = state.ego.speed;
        let s = scorer.progress().progress();
        let expert = expert_decide(world, &state, &path, s, &cfg.expert);
        let tl = red_light_bit(world, &state, cfg.expert.sensing_range);
        let ss = stop_sign_bit(world, &state, cfg.expert.sensing_range);
        let route_point = local_route_point(&pose, &path, s, ROUTE_POINT_AHEAD);
        let expert_wp = if expert.stopping() {
            Waypoints::STATIONARY
        } else {
            oracle_waypoints(&pose, &path, s, ORACLE_SPACINGS)
        };

        let (controls, agent_wp) = match cfg.driver {
            Driver::Expert => (expert.controls, expert_wp),
            Driver::Agent => {
                let (wp, mlp) = match net {
                    Some(net) => {
                        let features = match cfg.features {
                            FeatureSource::Oracle => {
                                let sdc = if cfg.variant.uses_sdc() {
                                    stats.sdc_consumed += 1;
                                    perception.as_ref().map(|p| &p.sdc)
                                } else {
                                    None
                                };
                                oracle_features(sdc, tl as u8 as f64, ss as u8 as f64, speed)
                            }
                            FeatureSource::Random { seed } => random_features(seed, step),
                        };
                        let (wp, latent) = predict_waypoints(&features, route_point, speed, tl as u8 as f64, ss as u8 as f64, net)?;
                        (wp, mlp_agent(&latent, net))
                    }
                    None => (expert_wp, expert.controls),
                };
                let pid_out = pid.control(&wp, speed);
                let (c, branch) = cfg.variant.apply(mlp, pid_out, &cfg.beta);
                stats.branches[match branch {
                    FusionBranch::Blend => 0,
                    FusionBranch::MlpOnly => 1,
                    FusionBranch::PidOnly => 2,
                    FusionBranch::Brake => 3,
                }] += 1;
                (c, wp)
            }
        };

        if let (true, Some(p)) = (log_now, perception) {
            let semantic_pred = match cfg.driver {
                Driver::Expert => p.semantic_gt.clone(),
                Driver::Agent => p.semantic_pred,
            };
            let outputs = PipelineOutputs {
                depth: p.depth,
                semantic_gt: p.semantic_gt,
                semantic_pred,
                route_point,
                expert_controls: expert.controls,
                agent_controls: controls,
                expert_waypoints: expert_wp,
                agent_waypoints: agent_wp,
                tl_gt: tl,
                ss_gt: ss,
                tl_pred: tl as u8 as f64,
                ss_pred: ss as u8 as f64,
            };
            sink.push(record_log(&state, outputs, step / cfg.steps_per_log, cfg.dt * cfg.steps_per_log as f64));
            stats.frames += 1;
        }

        if scorer.reason().is_some() || max_steps.is_some_and(|m| step >= m) {
            break;
        }

        state = step_world(world, &state, controls, cfg.dt);
        stats.steps += 1;
        let sample = TraceSample::capture(world, &state);
        scorer.observe(&sample);
        if cfg.keep_trace {
            trace.push(sample);
        }
    }

    stats.clamp_events = state.clamp_events;
    Ok(EpisodeOutcome {
        result: scorer.finish(route.name.clone()),
        stats,
        trace,
    })
}

/// The ego rear-axle positions of a trace.
pub fn trace_path(trace: &[TraceSample]) -> Vec<Vec2> {
    trace.iter().map(|s| s.pose.position()).collect()
}

/// Route point in the ego frame for a logged pose.
pub fn route_point_for(path: &ReferencePath, pose: &Pose, progress: f64) -> LocalPoint {
    local_route_point(pose, path, progress, ROUTE_POINT_AHEAD)
}

