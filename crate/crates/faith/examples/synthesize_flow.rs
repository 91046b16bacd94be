//! Generate a synthetic normal-flow field for a straight trajectory
//! and print a few vectors together with the ground-truth FOE.

use faith::flow::{
    course_angle, ground_truth_foe, random_scene, synthesize_flow_field, CameraModel, EgoMotion,
    NoiseModel,
};

fn main() {
    let cam = CameraModel::default_dvs();
    // 10 degrees to the right of the optical axis at 1 m/s.
    let course = 10.0f64.to_radians();
    let ego = EgoMotion::translation(course.tan(), 0.0, 1.0);

    let noise = NoiseModel {
        aperture_fraction: 1.0, // event cameras see normal flow only
        direction_sigma: 0.05,
        ..NoiseModel::none(7)
    };
    let scene = random_scene(200, &cam, 1.0, 10.0, 7);
    let flow = synthesize_flow_field(&scene, &ego, &cam, &noise).unwrap();

    let foe = ground_truth_foe(&ego, &cam).unwrap();
    let (h, v) = course_angle(&foe, &cam);
    println!("{} flow vectors", flow.len());
    println!("true FOE: ({:.2}, {:.2}) px", foe.x, foe.y);
    println!("course: {:.2} deg horizontal, {:.2} deg vertical", h, v);
    for f in flow.iter().take(5) {
        println!(
            "  ({:6.1}, {:6.1}) -> ({:7.2}, {:7.2}) px/s",
            f.pos.x, f.pos.y, f.u, f.v
        );
    }
}
