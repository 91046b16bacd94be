//! Run all four FOE estimators on the same noisy flow field and
//! compare their angular errors.

use faith::bench::Method;
use faith::flow::{
    angular_error_deg, ground_truth_foe, random_scene, synthesize_flow_field, CameraModel,
    EgoMotion, NoiseModel,
};

fn main() {
    let cam = CameraModel::default_dvs();
    let ego = EgoMotion::translation(5.0f64.to_radians().tan(), 0.0, 1.0);
    let noise = NoiseModel {
        aperture_fraction: 1.0,
        direction_sigma: 0.1,
        outlier_fraction: 0.1,
        ..NoiseModel::none(3)
    };
    let scene = random_scene(1000, &cam, 1.0, 10.0, 3);
    let flow = synthesize_flow_field(&scene, &ego, &cam, &noise).unwrap();
    let truth = ground_truth_foe(&ego, &cam).unwrap();

    println!("true FOE: ({:.2}, {:.2}) px", truth.x, truth.y);
    for method in Method::ALL {
        let est = method.run(&flow, &cam, 0).unwrap();
        println!(
            "{:10}  foe ({:7.2}, {:7.2})  error {:5.2} deg  score {:4}/{}",
            method.label(),
            est.foe.x,
            est.foe.y,
            angular_error_deg(&est.foe, &truth, &cam),
            est.score,
            flow.len()
        );
    }
}
