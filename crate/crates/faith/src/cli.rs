//! Command-line surface: `synth`, `estimate`, `bench` and `avoid`
//! subcommands binding the library into reproducible experiments.
//!
//! All randomness flows from a single `--seed` flag through derived
//! substreams, so a full flag set reproduces an experiment exactly.
//! Measured wall times go to stderr; stdout and output files are
//! deterministic for a fixed seed.
//!
//! Exit statuses: 0 success, 1 usage error, 2 data error, 3 method
//! failure.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::avoidance::{cluster_ttc_samples, compute_ttc, decide_avoidance, DbscanParams};
use crate::bench::{run_trial, summarize, sweep_trajectories, Method, TrialResult};
use crate::estimator::{detect_unbounded, FaithConfig};
use crate::flow::{
    course_angle, ground_truth_foe, random_scene, synthesize_flow_field, CameraModel, EgoMotion,
    NoiseModel,
};
use crate::geometry::Point2;
use crate::io::{
    read_camera_json, read_flow_csv, write_flow_csv, write_results_csv, write_summary_csv,
};
use crate::{Error, Result};

#[derive(Parser)]
#[command(
    name = "faith",
    about = "Focus-of-expansion estimation from sparse optic flow",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic flow field and write it as CSV
    Synth(SynthArgs),
    /// Estimate the FOE from a flow CSV
    Estimate(EstimateArgs),
    /// Run a trajectory sweep benchmark over the estimators
    Bench(BenchArgs),
    /// Cluster TTC samples and decide on an avoidance maneuver
    Avoid(AvoidArgs),
}

#[derive(Args, Clone)]
struct NoiseArgs {
    /// Noise preset: none | aperture
    #[arg(long, default_value = "none")]
    noise: String,
    /// Fraction of vectors projected onto a random edge normal
    #[arg(long)]
    aperture_fraction: Option<f64>,
    /// Gaussian angular jitter, radians
    #[arg(long)]
    direction_sigma: Option<f64>,
    /// Relative std of multiplicative magnitude noise
    #[arg(long)]
    magnitude_sigma: Option<f64>,
    /// Fraction of vectors replaced by uniform random flow
    #[arg(long)]
    outlier_fraction: Option<f64>,
}

impl NoiseArgs {
    fn model(&self, seed: u64) -> Result<NoiseModel> {
        let mut noise = match self.noise.as_str() {
            "none" => NoiseModel::none(seed),
            "aperture" => NoiseModel {
                aperture_fraction: 1.0,
                direction_sigma: 0.1,
                magnitude_sigma: 0.0,
                outlier_fraction: 0.1,
                seed,
            },
            other => {
                return Err(Error::Domain(format!(
                    "unknown noise preset `{other}` (expected none|aperture)"
                )))
            }
        };
        if let Some(v) = self.aperture_fraction {
            noise.aperture_fraction = v;
        }
        if let Some(v) = self.direction_sigma {
            noise.direction_sigma = v;
        }
        if let Some(v) = self.magnitude_sigma {
            noise.magnitude_sigma = v;
        }
        if let Some(v) = self.outlier_fraction {
            noise.outlier_fraction = v;
        }
        noise.validate()?;
        Ok(noise)
    }
}

#[derive(Args)]
struct SynthArgs {
    /// Output flow CSV path
    #[arg(long)]
    out: PathBuf,
    /// Camera intrinsics JSON (defaults to the 240x180 model)
    #[arg(long)]
    camera: Option<PathBuf>,
    /// Horizontal course angle, degrees
    #[arg(long, default_value_t = 0.0)]
    course_deg: f64,
    /// Vertical course angle, degrees
    #[arg(long, default_value_t = 0.0)]
    course_v_deg: f64,
    /// Number of scene points
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Scene depth range, metres
    #[arg(long, default_value_t = 1.0)]
    z_min: f64,
    #[arg(long, default_value_t = 10.0)]
    z_max: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    noise: NoiseArgs,
}

#[derive(Args)]
struct EstimateArgs {
    /// Estimator: faith | nesw | vecint | halfplane
    #[arg(long, default_value = "faith")]
    method: String,
    /// Input flow CSV
    #[arg(long)]
    flow: PathBuf,
    #[arg(long)]
    camera: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// RANSAC iteration budget (faith and vecint)
    #[arg(long)]
    iterations: Option<usize>,
    /// Optional JSON output path for the full estimate
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Number of trials in the sweep
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Symmetric course range: sweep covers [-R, R] degrees
    #[arg(long, default_value_t = 30.0)]
    range: f64,
    /// Out-of-view range MIN:MAX degrees (overrides --range)
    #[arg(long)]
    range_out: Option<String>,
    /// Comma-separated method list, or `all`
    #[arg(long, default_value = "all")]
    methods: String,
    /// Flow vectors per trial
    #[arg(long, default_value_t = 1000)]
    n_vectors: usize,
    /// Use sway (sinusoidal lateral velocity) trajectories
    #[arg(long)]
    sway: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    camera: Option<PathBuf>,
    /// Output prefix: writes <prefix>_results.csv and <prefix>_summary.csv
    #[arg(long, default_value = "bench")]
    out_prefix: String,
    #[command(flatten)]
    noise: NoiseArgs,
}

#[derive(Args)]
struct AvoidArgs {
    /// Input flow CSV
    #[arg(long)]
    flow: PathBuf,
    #[arg(long)]
    camera: Option<PathBuf>,
    /// FOE as `x,y` pixels; if omitted the FOE is estimated
    #[arg(long)]
    foe: Option<String>,
    /// Estimator used when --foe is not given
    #[arg(long, default_value = "faith")]
    method: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// TTC clip ceiling, seconds
    #[arg(long, default_value_t = 10.0)]
    ttc_clip: f64,
    /// Mean-TTC threshold for triggering avoidance, seconds
    #[arg(long, default_value_t = 3.0)]
    ttc_threshold: f64,
    /// DBSCAN neighborhood radius in feature space
    #[arg(long, default_value_t = 0.2)]
    eps: f64,
    /// DBSCAN minimum neighborhood size
    #[arg(long, default_value_t = 20)]
    min_pts: usize,
    /// Optional JSON output path for the decision
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_camera(path: &Option<PathBuf>) -> Result<CameraModel> {
    match path {
        Some(p) => read_camera_json(p),
        None => Ok(CameraModel::default_dvs()),
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain(_) | Error::EmptyRange => 1,
        Error::Io { .. } | Error::Parse { .. } | Error::Json(_) | Error::Csv(_) => 2,
        _ => 3,
    }
}

/// Parses arguments and runs the selected subcommand, returning the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are successes
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Synth(args) => cmd_synth(args),
        Command::Estimate(args) => cmd_estimate(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Avoid(args) => cmd_avoid(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn cmd_synth(args: SynthArgs) -> Result<i32> {
    let cam = load_camera(&args.camera)?;
    let forward = 1.0;
    let ego = EgoMotion::translation(
        forward * args.course_deg.to_radians().tan(),
        forward * args.course_v_deg.to_radians().tan(),
        forward,
    );
    let noise = args.noise.model(args.seed.wrapping_add(1))?;
    let scene = random_scene(args.n, &cam, args.z_min, args.z_max, args.seed);
    let flow = synthesize_flow_field(&scene, &ego, &cam, &noise)?;
    write_flow_csv(&args.out, &flow)?;
    let foe = ground_truth_foe(&ego, &cam)?;
    let (h, v) = course_angle(&foe, &cam);
    if !cam.contains_pixel(&foe) {
        eprintln!("warning: true FOE ({:.3}, {:.3}) lies outside image bounds", foe.x, foe.y);
    }
    println!("vectors: {}", flow.len());
    println!("foe_px: {:.6} {:.6}", foe.x, foe.y);
    println!("course_deg: {h:.6} {v:.6}");
    Ok(0)
}

fn cmd_estimate(args: EstimateArgs) -> Result<i32> {
    let cam = load_camera(&args.camera)?;
    let method = Method::parse(&args.method)?;
    let flow = read_flow_csv(&args.flow)?;
    if flow.len() < method.min_vectors() {
        return Err(Error::TooFewVectors {
            needed: method.min_vectors(),
            got: flow.len(),
        });
    }

    let start = Instant::now();
    let est = match (method, args.iterations) {
        (Method::Faith, Some(iterations)) => crate::estimator::estimate_foe(
            &flow,
            &cam,
            &FaithConfig {
                iterations,
                rng_seed: args.seed,
                ..Default::default()
            },
        )?,
        (Method::VecInt, Some(iterations)) => crate::baselines::estimate_vec_intersections(
            &flow,
            &cam,
            &crate::baselines::VecIntConfig {
                iterations,
                rng_seed: args.seed,
                ..Default::default()
            },
        )?,
        _ => method.run(&flow, &cam, args.seed)?,
    };
    let elapsed = start.elapsed().as_secs_f64();

    let (h, v) = course_angle(&est.foe, &cam);
    println!("method: {}", est.method);
    println!("foe_px: {:.6} {:.6}", est.foe.x, est.foe.y);
    println!("course_deg: {h:.6} {v:.6}");
    println!("score: {}", est.score);
    println!("bounded: {}", est.bounded);
    if method == Method::Faith && !est.bounded {
        let cfg = FaithConfig {
            rng_seed: args.seed,
            ..Default::default()
        };
        println!("escape: {}", detect_unbounded(&est, &cam, &cfg));
    }
    eprintln!("wall_time_s: {elapsed:.6}");

    if let Some(path) = &args.json {
        let doc = json!({
            "method": est.method,
            "foe_px": [est.foe.x, est.foe.y],
            "course_deg": [h, v],
            "score": est.score,
            "bounded": est.bounded,
            "region": est.region.vertices(),
        });
        std::fs::write(path, serde_json::to_string_pretty(&doc)?)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
    }
    Ok(0)
}

fn cmd_bench(args: BenchArgs) -> Result<i32> {
    let cam = load_camera(&args.camera)?;
    let methods: Vec<Method> = if args.methods == "all" {
        Method::ALL.to_vec()
    } else {
        args.methods
            .split(',')
            .map(Method::parse)
            .collect::<Result<_>>()?
    };
    let (min_deg, max_deg) = match &args.range_out {
        Some(spec) => {
            let (a, b) = spec.split_once(':').ok_or_else(|| {
                Error::Domain(format!("--range-out expects MIN:MAX, got `{spec}`"))
            })?;
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::Domain(format!("invalid angle `{s}` in --range-out")))
            };
            (parse(a)?, parse(b)?)
        }
        None => (-args.range, args.range),
    };
    let noise = args.noise.model(args.seed)?;
    let specs = sweep_trajectories(
        args.trials,
        min_deg,
        max_deg,
        args.sway,
        &noise,
        args.n_vectors,
        &methods,
        args.seed,
    )?;

    let mut results: Vec<TrialResult> = Vec::new();
    for spec in &specs {
        results.extend(run_trial(spec, &cam)?);
    }
    let failures = results.iter().filter(|r| r.error.is_some()).count();
    for r in results.iter().filter(|r| r.error.is_some()) {
        eprintln!(
            "trial {} {}: failed: {}",
            r.trial_id,
            r.method,
            r.error.as_deref().unwrap_or("")
        );
    }
    let summary = summarize(&results)?;

    let results_path = PathBuf::from(format!("{}_results.csv", args.out_prefix));
    let summary_path = PathBuf::from(format!("{}_summary.csv", args.out_prefix));
    write_results_csv(&results_path, &results)?;
    write_summary_csv(&summary_path, &summary)?;

    println!("trials: {} failures: {failures}", specs.len());
    for row in &summary.rows {
        println!(
            "{}: err {:.3} +/- {:.3} deg (n={})",
            row.method, row.mean_err_deg, row.std_err_deg, row.n
        );
        eprintln!(
            "{}: time {:.6} +/- {:.6} s/kvec",
            row.method, row.mean_time_s, row.std_time_s
        );
    }
    Ok(if failures == 0 { 0 } else { 3 })
}

fn cmd_avoid(args: AvoidArgs) -> Result<i32> {
    let cam = load_camera(&args.camera)?;
    let flow = read_flow_csv(&args.flow)?;
    let foe = match &args.foe {
        Some(spec) => {
            let (x, y) = spec
                .split_once(',')
                .ok_or_else(|| Error::Domain(format!("--foe expects X,Y, got `{spec}`")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Domain(format!("invalid coordinate `{s}` in --foe")))
            };
            Point2::new(parse(x)?, parse(y)?)
        }
        None => {
            let method = Method::parse(&args.method)?;
            method.run(&flow, &cam, args.seed)?.foe
        }
    };
    let params = DbscanParams {
        eps: args.eps,
        min_pts: args.min_pts,
        ttc_clip: args.ttc_clip,
    };
    params.validate()?;
    let samples = compute_ttc(&flow, &foe, args.ttc_clip);
    let (clusters, noise) = cluster_ttc_samples(&samples, &cam, &params)?;
    let decision = decide_avoidance(&clusters, &foe, args.ttc_threshold)?;

    let doc = json!({
        "foe_px": [foe.x, foe.y],
        "ttc_threshold_s": args.ttc_threshold,
        "clusters": clusters,
        "noise_count": noise.len(),
        "decision": decision,
    });
    let text = serde_json::to_string_pretty(&doc)?;
    println!("{text}");
    if let Some(path) = &args.out {
        std::fs::write(path, &text).map_err(|e| Error::io(path.display().to_string(), e))?;
    }
    Ok(0)
}
