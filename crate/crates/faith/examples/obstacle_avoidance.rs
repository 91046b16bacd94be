//! Time-to-contact clustering and the roll-away decision on a scene
//! with a near obstacle in front of a far background.

use faith::avoidance::{cluster_ttc_samples, compute_ttc, decide_avoidance, DbscanParams};
use faith::flow::{CameraModel, FlowVector};
use faith::geometry::Point2;

fn main() {
    let cam = CameraModel::default_dvs();
    let foe = Point2::new(120.0, 90.0);

    // Pure forward motion at 1 m/s towards a wall segment 2 m away
    // (left of centre) with background 8 m away: u = (x - foe_x) / Z.
    let mut flow = Vec::new();
    for i in 0..24 {
        for j in 0..14 {
            let x = 10.0 + 220.0 * i as f64 / 23.0;
            let y = 20.0 + 140.0 * j as f64 / 13.0;
            let z = if x < 150.0 { 2.0 } else { 8.0 };
            flow.push(FlowVector::new(
                0.0,
                Point2::new(x, y),
                (x - foe.x) / z,
                (y - foe.y) / z,
            ));
        }
    }

    let params = DbscanParams::default();
    let samples = compute_ttc(&flow, &foe, params.ttc_clip);
    let (clusters, noise) = cluster_ttc_samples(&samples, &cam, &params).unwrap();
    println!("{} clusters, {} noise points", clusters.len(), noise.len());
    for c in &clusters {
        println!(
            "  cluster {}: {} members, mean TTC {:.2} s, bbox ({:.0},{:.0})-({:.0},{:.0})",
            c.id,
            c.members.len(),
            c.mean_ttc,
            c.bbox.min.x,
            c.bbox.min.y,
            c.bbox.max.x,
            c.bbox.max.y
        );
    }

    let decision = decide_avoidance(&clusters, &foe, 3.0).unwrap();
    println!(
        "avoid: {}, roll {:?} for {:.1} s (obstacle TTC {:.2} s)",
        decision.avoid, decision.roll_sign, decision.duration, decision.obstacle.mean_ttc
    );
}
