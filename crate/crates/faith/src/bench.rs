//! Benchmark harness: trajectory sweeps, per-method angular error and
//! timing per 10^3 vectors, and aggregate statistics.
//!
//! Timing covers the estimator call only (flow synthesis and I/O are
//! excluded); each method gets one warm-up call and the median of five
//! timed repetitions.

use std::time::Instant;

use crate::baselines::{
    estimate_halfplane_map, estimate_nesw, estimate_vec_intersections, ProbabilityMap,
    VecIntConfig,
};
use crate::estimator::{estimate_foe, FaithConfig, FoeEstimate};
use crate::flow::{
    angular_error_deg, ground_truth_foe, random_scene, synthesize_flow_field, CameraModel,
    EgoMotion, FlowVector, NoiseModel,
};
use crate::{Error, Result};

pub const TIMING_REPS: usize = 5;

/// Estimator selector shared by the harness and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Faith,
    Nesw,
    VecInt,
    HalfPlane,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Faith, Method::Nesw, Method::VecInt, Method::HalfPlane];

    pub fn label(&self) -> &'static str {
        match self {
            Method::Faith => "faith",
            Method::Nesw => "nesw",
            Method::VecInt => "vecint",
            Method::HalfPlane => "halfplane",
        }
    }

    pub fn parse(s: &str) -> Result<Method> {
        match s {
            "faith" => Ok(Method::Faith),
            "nesw" => Ok(Method::Nesw),
            "vecint" => Ok(Method::VecInt),
            "halfplane" => Ok(Method::HalfPlane),
            other => Err(Error::Domain(format!(
                "unknown method `{other}` (expected faith|nesw|vecint|halfplane)"
            ))),
        }
    }

    /// Minimum number of flow vectors the method accepts.
    pub fn min_vectors(&self) -> usize {
        match self {
            Method::Faith => 3,
            Method::Nesw => 4,
            Method::VecInt => 2,
            Method::HalfPlane => 1,
        }
    }

    /// Runs the estimator once on the given flow.
    pub fn run(&self, flow: &[FlowVector], cam: &CameraModel, seed: u64) -> Result<FoeEstimate> {
        match self {
            Method::Faith => estimate_foe(
                flow,
                cam,
                &FaithConfig {
                    rng_seed: seed,
                    ..Default::default()
                },
            ),
            Method::Nesw => estimate_nesw(flow, cam),
            Method::VecInt => estimate_vec_intersections(
                flow,
                cam,
                &VecIntConfig {
                    rng_seed: seed,
                    ..Default::default()
                },
            ),
            Method::HalfPlane => {
                let mut map = ProbabilityMap::with_default_decay(cam);
                estimate_halfplane_map(flow, cam, &mut map)
            }
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Sinusoidal lateral-velocity modulation for sway trajectories.
#[derive(Debug, Clone, Copy)]
pub struct SwayProfile {
    /// m/s added to the lateral velocity.
    pub amplitude: f64,
    /// Hz.
    pub frequency: f64,
    /// Snapshot time at which the trial samples the trajectory.
    pub sample_time: f64,
}

/// One benchmark trial.
#[derive(Debug, Clone)]
pub struct TrialSpec {
    pub trial_id: usize,
    pub scene_seed: u64,
    pub noise: NoiseModel,
    /// Horizontal course angle, degrees.
    pub course_deg: f64,
    pub sway: Option<SwayProfile>,
    pub n_vectors: usize,
    pub methods: Vec<Method>,
}

impl TrialSpec {
    /// Instantaneous ego-motion of the trial (forward speed 1 m/s; for
    /// sway trials the lateral velocity is sampled at the snapshot
    /// time).
    pub fn ego(&self) -> EgoMotion {
        let forward = 1.0;
        let mut lateral = forward * self.course_deg.to_radians().tan();
        if let Some(s) = &self.sway {
            lateral += s.amplitude
                * (std::f64::consts::TAU * s.frequency * s.sample_time).sin();
        }
        EgoMotion::translation(lateral, 0.0, forward)
    }
}

/// Per-method outcome of one trial. `error` is set when the method
/// failed; failed entries are excluded from summaries.
#[derive(Debug, Clone)]
pub struct TrialResult {
    pub trial_id: usize,
    pub method: Method,
    pub angular_error_deg: f64,
    /// Seconds per 10^3 vectors, median over the timed repetitions.
    pub time_per_kvec_s: f64,
    pub score: usize,
    pub bounded: bool,
    pub error: Option<String>,
}

/// One aggregate row of the benchmark summary.
#[derive(Debug, Clone)]
pub struct SummaryRow {
    pub method: Method,
    pub mean_err_deg: f64,
    pub std_err_deg: f64,
    pub mean_time_s: f64,
    pub std_time_s: f64,
    /// Coefficient of variation of the angular error, percent.
    pub cv_pct: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Default)]
pub struct BenchmarkSummary {
    pub rows: Vec<SummaryRow>,
}

fn mix_seed(seed: u64, salt: u64) -> u64 {
    // splitmix64 step
    let mut z = seed.wrapping_add(salt.wrapping_mul(0x9e3779b97f4a7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Builds trial specs whose course angles uniformly cover
/// `[min_deg, max_deg]`. Deterministic per seed: scene and noise seeds
/// are derived substreams.
pub fn sweep_trajectories(
    count: usize,
    min_deg: f64,
    max_deg: f64,
    sway: bool,
    noise: &NoiseModel,
    n_vectors: usize,
    methods: &[Method],
    seed: u64,
) -> Result<Vec<TrialSpec>> {
    if count == 0 || max_deg < min_deg {
        return Err(Error::EmptyRange);
    }
    Ok((0..count)
        .map(|i| {
            let course_deg = if count == 1 {
                (min_deg + max_deg) / 2.0
            } else {
                min_deg + (max_deg - min_deg) * i as f64 / (count - 1) as f64
            };
            let sway = sway.then(|| SwayProfile {
                amplitude: 0.2,
                frequency: 0.5,
                sample_time: mix_seed(seed, 3 * i as u64 + 2) as f64 / u64::MAX as f64 * 10.0,
            });
            TrialSpec {
                trial_id: i,
                scene_seed: mix_seed(seed, 3 * i as u64),
                noise: NoiseModel {
                    seed: mix_seed(seed, 3 * i as u64 + 1),
                    ..*noise
                },
                course_deg,
                sway,
                n_vectors,
                methods: methods.to_vec(),
            }
        })
        .collect())
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    values[values.len() / 2]
}

/// Runs every requested method on the identical synthesized flow list
/// and measures wall time (warm-up run excluded, median of
/// [`TIMING_REPS`] repetitions).
pub fn run_trial(spec: &TrialSpec, cam: &CameraModel) -> Result<Vec<TrialResult>> {
    let ego = spec.ego();
    let truth = ground_truth_foe(&ego, cam)?;
    let scene = random_scene(spec.n_vectors, cam, 1.0, 10.0, spec.scene_seed);
    let flow = synthesize_flow_field(&scene, &ego, cam, &spec.noise)?;
    let method_seed = mix_seed(spec.scene_seed, 0xfae);

    let mut results = Vec::with_capacity(spec.methods.len());
    for method in &spec.methods {
        // Warm-up; also the estimate we report.
        let est = match method.run(&flow, cam, method_seed) {
            Ok(est) => est,
            Err(e) => {
                results.push(TrialResult {
                    trial_id: spec.trial_id,
                    method: *method,
                    angular_error_deg: f64::NAN,
                    time_per_kvec_s: f64::NAN,
                    score: 0,
                    bounded: false,
                    error: Some(e.to_string()),
                });
                continue;
            }
        };
        let mut times = Vec::with_capacity(TIMING_REPS);
        for _ in 0..TIMING_REPS {
            let start = Instant::now();
            let _ = method.run(&flow, cam, method_seed);
            times.push(start.elapsed().as_secs_f64());
        }
        let secs = median(&mut times);
        results.push(TrialResult {
            trial_id: spec.trial_id,
            method: *method,
            angular_error_deg: angular_error_deg(&est.foe, &truth, cam),
            time_per_kvec_s: secs * 1000.0 / flow.len() as f64,
            score: est.score,
            bounded: est.bounded,
            error: None,
        });
    }
    Ok(results)
}

/// Per-method mean, sample std (n-1 denominator) and coefficient of
/// variation over the completed trials.
pub fn summarize(results: &[TrialResult]) -> Result<BenchmarkSummary> {
    let completed: Vec<&TrialResult> = results.iter().filter(|r| r.error.is_none()).collect();
    if completed.is_empty() {
        return Err(Error::EmptyResults);
    }
    let mut rows = Vec::new();
    for method in Method::ALL {
        let errs: Vec<f64> = completed
            .iter()
            .filter(|r| r.method == method)
            .map(|r| r.angular_error_deg)
            .collect();
        if errs.is_empty() {
            continue;
        }
        let times: Vec<f64> = completed
            .iter()
            .filter(|r| r.method == method)
            .map(|r| r.time_per_kvec_s)
            .collect();
        let (mean_err, std_err) = mean_std(&errs);
        let (mean_time, std_time) = mean_std(&times);
        rows.push(SummaryRow {
            method,
            mean_err_deg: mean_err,
            std_err_deg: std_err,
            mean_time_s: mean_time,
            std_time_s: std_time,
            cv_pct: if mean_err != 0.0 {
                std_err / mean_err * 100.0
            } else {
                0.0
            },
            n: errs.len(),
        });
    }
    Ok(BenchmarkSummary { rows })
}

/// Mean and sample standard deviation; a single value reports std 0.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
