//! A small seeded benchmark sweep over all estimators, printed as a
//! per-method summary table.

use faith::bench::{run_trial, summarize, sweep_trajectories, Method};
use faith::flow::{CameraModel, NoiseModel};

fn main() {
    let cam = CameraModel::default_dvs();
    let noise = NoiseModel {
        aperture_fraction: 1.0,
        direction_sigma: 0.1,
        outlier_fraction: 0.1,
        ..NoiseModel::none(0)
    };
    let specs =
        sweep_trajectories(20, -25.0, 25.0, false, &noise, 500, &Method::ALL, 42).unwrap();

    let mut results = Vec::new();
    for spec in &specs {
        results.extend(run_trial(spec, &cam).unwrap());
    }
    let summary = summarize(&results).unwrap();

    println!(
        "{:<10} {:>10} {:>9} {:>12} {:>7} {:>4}",
        "method", "mean err", "std err", "s per kvec", "cv %", "n"
    );
    for row in &summary.rows {
        println!(
            "{:<10} {:>9.3} {:>9.3} {:>12.6} {:>7.1} {:>4}",
            row.method.label(),
            row.mean_err_deg,
            row.std_err_deg,
            row.mean_time_s,
            row.cv_pct,
            row.n
        );
    }
}
