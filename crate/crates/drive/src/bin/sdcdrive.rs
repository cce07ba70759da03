use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use sdc_core::control::{NetworkDims, PolicyVariant, WeightBundle};
use sdc_core::episode::AgentInputs;
use sdc_core::world::ScenarioKind;
use sdc_drive::config::RunConfig;
use sdc_drive::harness::{self, RunReport};
use sdc_drive::weights::save_weights;
use sdc_drive::DriveError;

#[derive(Parser)]
#[command(name = "sdcdrive", version, about = "Closed-loop driving with semantic depth cloud mapping")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Drive the configured routes and print the driving-score report.
    Run(RunArgs),
    /// Drive every route with the expert and write supervision logs.
    GenLogs(RunArgs),
    /// Score a predicted drive log against a reference log.
    Score(ScoreArgs),
    /// Write PNG composites of a drive log, or of a fresh episode.
    Render(RenderArgs),
    /// Write a weight bundle for the network agent.
    MakeWeights(WeightArgs),
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Run configuration (TOML); flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Map file or `demo:<name>`.
    #[arg(long)]
    map: Option<String>,
    /// Route name to drive (repeatable).
    #[arg(long = "route")]
    routes: Vec<String>,
    /// Extra route-set file (repeatable).
    #[arg(long = "route-set")]
    route_sets: Vec<PathBuf>,
    #[arg(long)]
    scenario: Option<String>,
    /// proposed, mlp, pid, both or no-sdc.
    #[arg(long)]
    variant: Option<String>,
    /// Weather preset (repeatable).
    #[arg(long = "weather")]
    weathers: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    repeats: Option<u32>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    inputs: Option<Inputs>,
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Write every logged frame under the output directory.
    #[arg(long)]
    log_frames: bool,
    /// Also store each frame's occupancy tensor.
    #[arg(long)]
    write_sdc: bool,
    #[arg(long)]
    max_duration: Option<f64>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Inputs {
    Oracle,
    Network,
}

#[derive(Args)]
struct ScoreArgs {
    /// Log holding the predictions.
    #[arg(long)]
    pred: PathBuf,
    /// Log holding the supervision.
    #[arg(long)]
    reference: PathBuf,
    /// Also write the report here.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    /// Render an existing drive log instead of driving.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Render every n-th frame.
    #[arg(long, default_value_t = 1)]
    every: usize,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightKind {
    Random,
    Zeros,
    Delta,
}

#[derive(Args)]
struct WeightArgs {
    #[arg(long)]
    output: PathBuf,
    #[arg(long, value_enum, default_value_t = WeightKind::Random)]
    kind: WeightKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    hidden: Option<usize>,
    #[arg(long)]
    mlp_hidden: Option<usize>,
    /// Per-step waypoint delta of the `delta` kind, meters.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    dx: f32,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    dy: f32,
}

fn run_config(args: &RunArgs) -> Result<RunConfig, DriveError> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(m) = &args.map {
        cfg.map = m.clone();
    }
    if !args.routes.is_empty() {
        cfg.routes = args.routes.clone();
    }
    cfg.route_sets.extend(args.route_sets.iter().cloned());
    if let Some(s) = &args.scenario {
        cfg.scenario = s.parse::<ScenarioKind>()?;
    }
    if let Some(v) = &args.variant {
        cfg.variant = v.parse::<PolicyVariant>()?;
    }
    if !args.weathers.is_empty() {
        cfg.weathers = args.weathers.clone();
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if args.repeats.is_some() {
        cfg.repeats = args.repeats;
    }
    if args.output.is_some() {
        cfg.output = args.output.clone();
    }
    if let Some(i) = args.inputs {
        cfg.inputs = match i {
            Inputs::Oracle => AgentInputs::Oracle,
            Inputs::Network => AgentInputs::Network,
        };
    }
    if args.weights.is_some() {
        cfg.weights = args.weights.clone();
    }
    cfg.log_frames |= args.log_frames;
    cfg.write_sdc |= args.write_sdc;
    if args.max_duration.is_some() {
        cfg.max_duration_s = args.max_duration;
    }
    if args.threads.is_some() {
        cfg.threads = args.threads;
    }
    Ok(cfg)
}

fn summary(report: &RunReport) -> serde_json::Value {
    serde_json::json!({
        "map": report.map,
        "scenario": report.scenario,
        "variant": report.variant,
        "aggregate": report.aggregate,
        "episodes": report.episodes.iter().map(|e| serde_json::json!({
            "route": e.route,
            "weather": e.weather,
            "repeat": e.repeat,
            "ds": e.result.ds,
            "rc": e.result.rc,
            "ip": e.result.ip,
            "termination": e.result.termination,
            "infractions": e.result.ledger.counts(),
        })).collect::<Vec<_>>(),
    })
}

fn execute(cli: Cli) -> anyhow::Result<serde_json::Value> {
    Ok(match cli.command {
        Command::Run(args) => summary(&harness::run_scenario(&run_config(&args)?)?),
        Command::GenLogs(args) => summary(&harness::generate_expert_logs(&run_config(&args)?)?),
        Command::Score(args) => {
            let report = harness::score_logs(&args.pred, &args.reference, &RunConfig::default().alpha)?;
            let value = serde_json::to_value(&report)?;
            if let Some(path) = &args.output {
                std::fs::write(path, serde_json::to_string_pretty(&value)? + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            value
        }
        Command::Render(args) => {
            let cfg = run_config(&args.run)?;
            let out = cfg
                .output
                .clone()
                .ok_or_else(|| DriveError::Config("render needs --output".into()))?;
            let written = match &args.log {
                Some(log) => harness::render_log(log, &out, args.every, &cfg)?,
                None => harness::render_episode(&cfg, &out, args.every)?,
            };
            serde_json::json!({ "written": written.len(), "output": out })
        }
        Command::MakeWeights(args) => {
            let mut dims = NetworkDims::default();
            if let Some(h) = args.hidden {
                dims.hidden = h;
            }
            if let Some(m) = args.mlp_hidden {
                dims.mlp_hidden = m;
            }
            let bundle = match args.kind {
                WeightKind::Random => WeightBundle::random(dims, args.seed),
                WeightKind::Zeros => WeightBundle::zeros(dims),
                WeightKind::Delta => WeightBundle::constant_delta(dims, args.dx, args.dy),
            };
            save_weights(&args.output, &bundle)?;
            serde_json::json!({ "output": args.output, "tensors": bundle.tensors.len() })
        }
    })
}

fn fail(kind: &str, message: String) -> ExitCode {
    let record = serde_json::json!({ "error": kind, "message": message });
    eprintln!("{record}");
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", e.to_string()),
    };
    match execute(cli) {
        Ok(value) => {
            println!("{}", serde_json::to_string_pretty(&value).expect("reports serialize"));
            ExitCode::SUCCESS
        }
        Err(e) => match e.downcast_ref::<DriveError>() {
            Some(d) => fail(d.kind(), d.to_string()),
            None => fail("internal", format!("{e:#}")),
        },
    }
}
