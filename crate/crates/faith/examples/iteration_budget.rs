//! How the RANSAC iteration budget trades accuracy for work: the
//! closed-form minimum for a target confidence, and the measured error
//! as the budget grows past it.

use faith::estimator::{estimate_foe, required_iterations, FaithConfig};
use faith::flow::{
    angular_error_deg, ground_truth_foe, random_scene, synthesize_flow_field, CameraModel,
    EgoMotion, NoiseModel,
};

fn main() {
    println!("minimum iterations for 95% confidence:");
    for &(w, n) in &[(0.75, 10u32), (0.9, 10), (0.5, 5)] {
        let iters = required_iterations(0.95, w, n).unwrap();
        println!("  inlier ratio {w}, sample size {n}: {iters}");
    }

    let cam = CameraModel::default_dvs();
    let ego = EgoMotion::translation(0.1, 0.0, 1.0);
    let truth = ground_truth_foe(&ego, &cam).unwrap();

    // Normal flow (every vector aperture-projected) gives the
    // half-planes diverse orientations, so the consensus region keeps
    // tightening as the budget grows.
    println!("\nerror vs budget (normal-flow fields, 600 vectors):");
    for iterations in [52, 200, 1000, 4000] {
        let mut errs: Vec<f64> = (0..20)
            .map(|seed| {
                let scene = random_scene(600, &cam, 1.0, 10.0, seed);
                let noise = NoiseModel {
                    aperture_fraction: 1.0,
                    ..NoiseModel::none(seed)
                };
                let flow = synthesize_flow_field(&scene, &ego, &cam, &noise).unwrap();
                let cfg = FaithConfig { iterations, rng_seed: seed, ..Default::default() };
                let est = estimate_foe(&flow, &cam, &cfg).unwrap();
                angular_error_deg(&est.foe, &truth, &cam)
            })
            .collect();
        errs.sort_by(f64::total_cmp);
        println!("  {iterations:5} iterations: median {:.3} deg", errs[errs.len() / 2]);
    }
}
