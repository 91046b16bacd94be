//! Courses outside the field of view leave the FOE region unbounded;
//! the clipped boundary side indicates where the camera is heading.

use faith::estimator::{detect_unbounded, estimate_foe, FaithConfig};
use faith::flow::{random_scene, synthesize_flow_field, CameraModel, EgoMotion, NoiseModel};

fn main() {
    let cam = CameraModel::default_dvs();
    // The 240x180 model spans +-30 degrees horizontally.
    for course_deg in [0.0, 20.0, 45.0, 70.0, -45.0] {
        let ego = EgoMotion::translation(f64::to_radians(course_deg).tan(), 0.0, 1.0);
        let scene = random_scene(400, &cam, 1.0, 10.0, 5);
        let flow = synthesize_flow_field(&scene, &ego, &cam, &NoiseModel::none(5)).unwrap();
        let cfg = FaithConfig { bound_margin: 0.05, ..Default::default() };
        let est = estimate_foe(&flow, &cam, &cfg).unwrap();
        let escape = detect_unbounded(&est, &cam, &cfg);
        println!(
            "course {course_deg:6.1} deg: bounded {:5}, escape {escape}",
            est.bounded
        );
    }
}
