//! The three comparison FOE estimators: direction counting (NESW),
//! vector-intersection RANSAC, and the dense negative-half-plane
//! probability map with exponential decay.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::estimator::FoeEstimate;
use crate::flow::{CameraModel, FlowVector};
use crate::geometry::{ConvexPolygon, Point2};
use crate::{Error, Result};

/// Dense per-pixel accumulator of FOE evidence. Pixels inside the
/// negative half-plane of each incoming vector gain evidence; all
/// other pixels decay multiplicatively. Stateful across calls.
#[derive(Debug, Clone)]
pub struct ProbabilityMap {
    pub width: usize,
    pub height: usize,
    values: Vec<f64>,
    pub decay: f64,
}

impl ProbabilityMap {
    pub fn new(cam: &CameraModel, decay: f64) -> Self {
        ProbabilityMap {
            width: cam.width,
            height: cam.height,
            values: vec![0.0; cam.width * cam.height],
            decay,
        }
    }

    /// Default decay sized so roughly 700 vector updates halve stale
    /// evidence.
    pub fn with_default_decay(cam: &CameraModel) -> Self {
        ProbabilityMap::new(cam, 0.999)
    }

    pub fn value(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    /// Row-major argmax; ties go to the smallest index.
    fn argmax(&self) -> (usize, usize) {
        let mut best = 0;
        for (i, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = i;
            }
        }
        (best % self.width, best / self.width)
    }
}

/// Configuration for the vector-intersection RANSAC baseline.
#[derive(Debug, Clone, Copy)]
pub struct VecIntConfig {
    pub iterations: usize,
    /// Point-to-line inlier distance threshold, pixels.
    pub inlier_dist: f64,
    pub rng_seed: u64,
}

impl Default for VecIntConfig {
    fn default() -> Self {
        VecIntConfig {
            // Same budget as the half-plane estimator so timing
            // comparisons isolate per-iteration cost.
            iterations: 52,
            inlier_dist: 3.0,
            rng_seed: 0,
        }
    }
}

/// Direction-counting estimator: scans every integer pixel column and
/// row, counting vectors whose flow sign disagrees with an FOE at that
/// coordinate. O(N * M) in vectors and image size.
pub fn estimate_nesw(flow: &[FlowVector], cam: &CameraModel) -> Result<FoeEstimate> {
    if flow.len() < 4 {
        return Err(Error::TooFewVectors {
            needed: 4,
            got: flow.len(),
        });
    }
    let scan = |extent: usize, coord: fn(&FlowVector) -> f64, comp: fn(&FlowVector) -> f64| {
        let mut best = (0usize, usize::MAX);
        for c in 0..extent {
            let cf = c as f64;
            let disagreements = flow
                .iter()
                .filter(|f| {
                    // Flow should expand away from the FOE coordinate.
                    (coord(f) < cf && comp(f) > 0.0) || (coord(f) > cf && comp(f) < 0.0)
                })
                .count();
            if disagreements < best.1 {
                best = (c, disagreements);
            }
        }
        best.0
    };
    let x = scan(cam.width, |f| f.pos.x, |f| f.u);
    let y = scan(cam.height, |f| f.pos.y, |f| f.v);
    let foe = Point2::new(x as f64, y as f64);
    let score = flow
        .iter()
        .filter(|f| {
            let ok_x = !((f.pos.x < foe.x && f.u > 0.0) || (f.pos.x > foe.x && f.u < 0.0));
            let ok_y = !((f.pos.y < foe.y && f.v > 0.0) || (f.pos.y > foe.y && f.v < 0.0));
            ok_x && ok_y
        })
        .count();
    Ok(FoeEstimate {
        foe,
        score,
        region: ConvexPolygon::empty(),
        bounded: true,
        method: "nesw",
    })
}

/// RANSAC over pairwise flow-line intersections: a candidate FOE is the
/// intersection of the lines through two random vectors along their
/// flow directions, scored by how many flow lines pass within
/// `inlier_dist` of it. Can localize an FOE outside the image.
pub fn estimate_vec_intersections(
    flow: &[FlowVector],
    _cam: &CameraModel,
    cfg: &VecIntConfig,
) -> Result<FoeEstimate> {
    if flow.len() < 2 {
        return Err(Error::TooFewVectors {
            needed: 2,
            got: flow.len(),
        });
    }
    // Unit flow directions; needed both for intersection and for the
    // point-to-line distance.
    let dirs: Vec<(f64, f64)> = flow
        .iter()
        .map(|f| {
            let m = f.magnitude();
            if m == 0.0 {
                Err(Error::DegenerateInput("zero-magnitude flow vector".into()))
            } else {
                Ok((f.u / m, f.v / m))
            }
        })
        .collect::<Result<_>>()?;

    let n = flow.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut best: Option<(usize, Point2)> = None;
    for _ in 0..cfg.iterations {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let cross = dirs[i].0 * dirs[j].1 - dirs[i].1 * dirs[j].0;
        if cross.abs() < 1e-9 {
            // Parallel pair; counts against the budget.
            continue;
        }
        let dx = flow[j].pos.x - flow[i].pos.x;
        let dy = flow[j].pos.y - flow[i].pos.y;
        let t = (dx * dirs[j].1 - dy * dirs[j].0) / cross;
        let candidate = Point2::new(
            flow[i].pos.x + t * dirs[i].0,
            flow[i].pos.y + t * dirs[i].1,
        );
        let inliers = flow
            .iter()
            .zip(&dirs)
            .filter(|(f, d)| {
                let px = candidate.x - f.pos.x;
                let py = candidate.y - f.pos.y;
                (px * d.1 - py * d.0).abs() <= cfg.inlier_dist
            })
            .count();
        if best.map_or(true, |(s, _)| inliers > s) {
            best = Some((inliers, candidate));
        }
    }
    let (score, foe) = best.ok_or(Error::DegenerateField)?;
    Ok(FoeEstimate {
        foe,
        score,
        region: ConvexPolygon::empty(),
        bounded: true,
        method: "vecint",
    })
}

/// Dense probability-map estimator: for each vector in timestamp
/// order, every pixel inside its negative half-plane gains one unit of
/// evidence while every other pixel decays. The FOE is the argmax
/// pixel. O(N * M_p). The map carries state across calls.
pub fn estimate_halfplane_map(
    flow: &[FlowVector],
    cam: &CameraModel,
    map: &mut ProbabilityMap,
) -> Result<FoeEstimate> {
    if flow.is_empty() {
        return Err(Error::TooFewVectors { needed: 1, got: 0 });
    }
    if map.width != cam.width || map.height != cam.height {
        return Err(Error::DimensionMismatch {
            map_w: map.width,
            map_h: map.height,
            cam_w: cam.width,
            cam_h: cam.height,
        });
    }
    let mut order: Vec<usize> = (0..flow.len()).collect();
    order.sort_by(|&a, &b| flow[a].t.total_cmp(&flow[b].t));

    for &i in &order {
        let h = flow[i].negative_half_plane()?;
        for y in 0..map.height {
            let dy = y as f64 - h.anchor.y;
            let base = dy * h.normal.1 - h.anchor.x * h.normal.0;
            let row = &mut map.values[y * map.width..(y + 1) * map.width];
            for (x, v) in row.iter_mut().enumerate() {
                // signed distance = (x - ax) nx + (y - ay) ny
                if x as f64 * h.normal.0 + base <= 0.0 {
                    *v += 1.0;
                } else {
                    *v *= map.decay;
                }
            }
        }
    }
    let (x, y) = map.argmax();
    let foe = Point2::new(x as f64, y as f64);
    let score = flow
        .iter()
        .filter(|f| {
            f.negative_half_plane()
                .map(|h| h.contains_with_slack(&foe, 1e-6))
                .unwrap_or(false)
        })
        .count();
    Ok(FoeEstimate {
        foe,
        score,
        region: ConvexPolygon::empty(),
        bounded: true,
        method: "halfplane",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{random_scene, synthesize_flow_field, EgoMotion, NoiseModel};

    fn cam() -> CameraModel {
        CameraModel::default_dvs()
    }

    /// Dense exactly-radial field with vectors on both sides of the FOE
    /// in every axis.
    fn radial_field(foe: Point2, n: usize) -> Vec<FlowVector> {
        (0..n)
            .map(|i| {
                let a = i as f64 * 2.399;
                let r = 1.0 + (i % 7) as f64 * 12.0;
                let pos = Point2::new(foe.x + r * a.cos(), foe.y + r * a.sin());
                FlowVector::new(0.0, pos, (pos.x - foe.x) * 0.1, (pos.y - foe.y) * 0.1)
            })
            .collect()
    }

    #[test]
    fn nesw_exact_on_radial_field() {
        let est = estimate_nesw(&radial_field(Point2::new(120.0, 90.0), 120), &cam()).unwrap();
        assert_eq!(est.foe, Point2::new(120.0, 90.0));
    }

    #[test]
    fn nesw_mirrored_field_mirrors_x() {
        let c = cam();
        let field = radial_field(Point2::new(80.0, 90.0), 120);
        let mirrored: Vec<FlowVector> = field
            .iter()
            .map(|f| {
                FlowVector::new(f.t, Point2::new(c.width as f64 - f.pos.x, f.pos.y), -f.u, f.v)
            })
            .collect();
        let a = estimate_nesw(&field, &c).unwrap();
        let b = estimate_nesw(&mirrored, &c).unwrap();
        assert_eq!(a.foe.x, c.width as f64 - b.foe.x);
        assert_eq!(a.foe.y, b.foe.y);
    }

    #[test]
    fn nesw_one_sided_field_saturates_left() {
        let c = cam();
        let flow: Vec<FlowVector> = (0..20)
            .map(|i| {
                FlowVector::new(
                    0.0,
                    Point2::new(20.0 + i as f64 * 10.0, 90.0),
                    3.0,
                    if i % 2 == 0 { 0.5 } else { -0.5 },
                )
            })
            .collect();
        let est = estimate_nesw(&flow, &c).unwrap();
        assert_eq!(est.foe.x, 0.0);
    }

    #[test]
    fn vecint_exact_on_concurrent_lines() {
        let flow = radial_field(Point2::new(50.0, 40.0), 60);
        let est = estimate_vec_intersections(&flow, &cam(), &VecIntConfig::default()).unwrap();
        assert!((est.foe.x - 50.0).abs() < 1e-6);
        assert!((est.foe.y - 40.0).abs() < 1e-6);
        assert_eq!(est.score, 60);
    }

    #[test]
    fn vecint_single_intersection() {
        let flow = vec![
            FlowVector::new(0.0, Point2::new(0.0, 0.0), 1.0, 0.0),
            FlowVector::new(0.0, Point2::new(10.0, 0.0), 0.0, 1.0),
        ];
        let est = estimate_vec_intersections(&flow, &cam(), &VecIntConfig::default()).unwrap();
        assert!((est.foe.x - 10.0).abs() < 1e-9);
        assert!(est.foe.y.abs() < 1e-9);
    }

    #[test]
    fn vecint_localizes_out_of_fov_foe() {
        let c = cam();
        // Course at 45 degrees: FOE far outside the image.
        let ego = EgoMotion::translation(45.0f64.to_radians().tan(), 0.0, 1.0);
        let truth = crate::flow::ground_truth_foe(&ego, &c).unwrap();
        let scene = random_scene(150, &c, 1.0, 10.0, 17);
        let flow = synthesize_flow_field(&scene, &ego, &c, &NoiseModel::none(3)).unwrap();
        // Brute-force all-pairs intersection median as the oracle.
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..flow.len() {
            for j in (i + 1)..flow.len() {
                let (fi, fj) = (&flow[i], &flow[j]);
                let cross = fi.u * fj.v - fi.v * fj.u;
                if cross.abs() < 1e-6 {
                    continue;
                }
                let dx = fj.pos.x - fi.pos.x;
                let dy = fj.pos.y - fi.pos.y;
                let t = (dx * fj.v - dy * fj.u) / cross;
                xs.push(fi.pos.x + t * fi.u);
                ys.push(fi.pos.y + t * fi.v);
            }
        }
        xs.sort_by(f64::total_cmp);
        ys.sort_by(f64::total_cmp);
        let oracle = Point2::new(xs[xs.len() / 2], ys[ys.len() / 2]);
        assert!(oracle.distance(&truth) < 1.0);

        let cfg = VecIntConfig::default();
        let est = estimate_vec_intersections(&flow, &c, &cfg).unwrap();
        assert!(est.foe.distance(&oracle) <= cfg.inlier_dist);
    }

    #[test]
    fn vecint_fixed_seed_is_deterministic() {
        let flow = radial_field(Point2::new(70.0, 60.0), 40);
        let cfg = VecIntConfig {
            rng_seed: 3,
            ..Default::default()
        };
        let a = estimate_vec_intersections(&flow, &cam(), &cfg).unwrap();
        let b = estimate_vec_intersections(&flow, &cam(), &cfg).unwrap();
        assert_eq!(a.foe, b.foe);
        assert_eq!(a.score, b.score);
    }

    #[test]
    fn vecint_all_parallel_is_degenerate() {
        let flow: Vec<FlowVector> = (0..10)
            .map(|i| FlowVector::new(0.0, Point2::new(i as f64 * 10.0, 50.0), 2.0, 0.0))
            .collect();
        assert!(matches!(
            estimate_vec_intersections(&flow, &cam(), &VecIntConfig::default()),
            Err(Error::DegenerateField)
        ));
    }

    #[test]
    fn map_single_vector_updates_negative_side() {
        let c = cam();
        let mut map = ProbabilityMap::with_default_decay(&c);
        let flow = vec![FlowVector::new(0.0, Point2::new(120.0, 90.0), 1.0, 0.0)];
        let est = estimate_halfplane_map(&flow, &c, &mut map).unwrap();
        assert!(est.foe.x <= 120.0);
        assert_eq!(map.value(0, 0), 1.0);
        assert_eq!(map.value(200, 90), 0.0);
    }

    #[test]
    fn map_radial_field_peaks_at_foe() {
        let c = cam();
        let mut map = ProbabilityMap::with_default_decay(&c);
        let flow = radial_field(Point2::new(100.0, 80.0), 200);
        let est = estimate_halfplane_map(&flow, &c, &mut map).unwrap();
        assert!((est.foe.x - 100.0).abs() <= 1.0);
        assert!((est.foe.y - 80.0).abs() <= 1.0);
    }

    #[test]
    fn map_without_decay_accumulates_linearly() {
        let c = cam();
        let mut once = ProbabilityMap::new(&c, 1.0);
        let mut twice = ProbabilityMap::new(&c, 1.0);
        let flow = radial_field(Point2::new(110.0, 70.0), 30);
        estimate_halfplane_map(&flow, &c, &mut once).unwrap();
        estimate_halfplane_map(&flow, &c, &mut twice).unwrap();
        estimate_halfplane_map(&flow, &c, &mut twice).unwrap();
        for y in (0..c.height).step_by(13) {
            for x in (0..c.width).step_by(17) {
                assert_eq!(twice.value(x, y), 2.0 * once.value(x, y));
            }
        }
    }

    #[test]
    fn map_dimension_mismatch_is_error() {
        let c = cam();
        let mut map = ProbabilityMap::new(
            &CameraModel {
                width: 100,
                height: 100,
                ..c
            },
            0.999,
        );
        let flow = radial_field(Point2::new(50.0, 50.0), 10);
        assert!(matches!(
            estimate_halfplane_map(&flow, &c, &mut map),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
