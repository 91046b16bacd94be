//! RANSAC half-plane-intersection FOE estimation.
//!
//! Each iteration seeds a candidate region from the expanded image
//! rectangle clipped by two random negative half-planes, then keeps
//! clipping with further random vectors while the area strictly
//! shrinks. The first non-shrinking pick stops the inner loop and the
//! region centroid is scored by counting how many of all half-planes
//! contain it; the best-scoring iteration wins.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::flow::{CameraModel, FlowVector};
use crate::geometry::{ConvexPolygon, HalfPlane, Point2};
use crate::{Error, Result};

/// Relative tolerance for the strict area-decrease test.
const AREA_DECREASE_RTOL: f64 = 1e-9;
/// Slack when counting half-planes that contain a centroid.
const SCORE_SLACK: f64 = 1e-6;
/// Tolerance for detecting vertices on the search boundary.
const BOUNDARY_TOUCH_EPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
pub struct FaithConfig {
    /// RANSAC iteration budget.
    pub iterations: usize,
    pub rng_seed: u64,
    /// Expansion of the initial search rectangle beyond the image, as a
    /// fraction of the image size on each side.
    pub bound_margin: f64,
    pub min_vectors: usize,
}

impl Default for FaithConfig {
    fn default() -> Self {
        FaithConfig {
            // required_iterations(0.95, 0.75, 10)
            iterations: 52,
            rng_seed: 0,
            bound_margin: 0.5,
            min_vectors: 3,
        }
    }
}

impl FaithConfig {
    /// The search rectangle: the image expanded by `bound_margin` of
    /// its size on every side.
    pub fn search_bounds(&self, cam: &CameraModel) -> (f64, f64, f64, f64) {
        let mx = self.bound_margin * cam.width as f64;
        let my = self.bound_margin * cam.height as f64;
        (-mx, -my, cam.width as f64 + mx, cam.height as f64 + my)
    }
}

/// Side of the image through which an unbounded FOE region escapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EscapeDirection {
    Left,
    Right,
    Up,
    Down,
    None,
}

impl std::fmt::Display for EscapeDirection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EscapeDirection::Left => "left",
            EscapeDirection::Right => "right",
            EscapeDirection::Up => "up",
            EscapeDirection::Down => "down",
            EscapeDirection::None => "none",
        };
        f.write_str(s)
    }
}

/// Result of an FOE estimation.
#[derive(Debug, Clone, Serialize)]
pub struct FoeEstimate {
    pub foe: Point2,
    /// Number of negative half-planes containing `foe`.
    pub score: usize,
    /// Best candidate region (empty for point-estimate methods).
    pub region: ConvexPolygon,
    /// False if the region touched the expanded search boundary.
    pub bounded: bool,
    pub method: &'static str,
}

/// Minimum RANSAC iteration count for confidence `p`, inlier ratio `w`
/// and model size `n`: ceil(log(1-p) / log(1-w^n)). An all-inlier set
/// (w = 1) needs a single iteration.
pub fn required_iterations(p: f64, w: f64, n: u32) -> Result<usize> {
    if !(0.0..1.0).contains(&p) || p == 0.0 {
        return Err(Error::Domain(format!("p must be in (0, 1), got {p}")));
    }
    if !(0.0..=1.0).contains(&w) || w == 0.0 {
        return Err(Error::Domain(format!("w must be in (0, 1], got {w}")));
    }
    if n < 1 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    let wn = w.powi(n as i32);
    if wn >= 1.0 {
        return Ok(1);
    }
    let iters = ((1.0 - p).ln() / (1.0 - wn).ln()).ceil();
    Ok((iters as usize).max(1))
}

/// Runs the RANSAC half-plane estimator. Deterministic for a fixed
/// `cfg.rng_seed`.
pub fn estimate_foe(
    flow: &[FlowVector],
    cam: &CameraModel,
    cfg: &FaithConfig,
) -> Result<FoeEstimate> {
    if flow.len() < cfg.min_vectors.max(2) {
        return Err(Error::TooFewVectors {
            needed: cfg.min_vectors.max(2),
            got: flow.len(),
        });
    }
    let half_planes: Vec<HalfPlane> = flow
        .iter()
        .map(FlowVector::negative_half_plane)
        .collect::<Result<_>>()?;

    let (min_x, min_y, max_x, max_y) = cfg.search_bounds(cam);
    let initial = ConvexPolygon::rectangle(min_x, min_y, max_x, max_y);

    let n = half_planes.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut best: Option<(usize, f64, FoeEstimate)> = None;
    let mut pool: Vec<usize> = (0..n).collect();

    for _ in 0..cfg.iterations {
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let mut region = initial.clip(&half_planes[a]).clip(&half_planes[b]);
        if region.is_empty() {
            // Disjoint seed pair; counts against the budget.
            continue;
        }
        let mut area = region.area();

        pool.clear();
        pool.extend((0..n).filter(|&i| i != a && i != b));
        pool.shuffle(&mut rng);

        let mut degenerate = false;
        for &i in &pool {
            let clipped = region.clip(&half_planes[i]);
            let new_area = clipped.area();
            if clipped.is_empty() {
                degenerate = true;
                break;
            }
            if new_area < area * (1.0 - AREA_DECREASE_RTOL) {
                region = clipped;
                area = new_area;
            } else {
                break;
            }
        }
        if degenerate {
            continue;
        }

        let centroid = match region.centroid() {
            Ok(c) => c,
            Err(_) => continue,
        };
        let score = half_planes
            .iter()
            .filter(|h| h.contains_with_slack(&centroid, SCORE_SLACK))
            .count();

        let better = match &best {
            None => true,
            Some((best_score, best_area, _)) => {
                score > *best_score || (score == *best_score && area < *best_area)
            }
        };
        if better {
            let bounded = !touches_bounds(&region, min_x, min_y, max_x, max_y);
            best = Some((
                score,
                area,
                FoeEstimate {
                    foe: centroid,
                    score,
                    region: region.clone(),
                    bounded,
                    method: "faith",
                },
            ));
        }
    }

    best.map(|(_, _, est)| est)
        .ok_or(Error::AllIterationsDegenerate)
}

fn touches_bounds(region: &ConvexPolygon, min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> bool {
    region.vertices().iter().any(|v| {
        (v.x - min_x).abs() < BOUNDARY_TOUCH_EPS
            || (v.x - max_x).abs() < BOUNDARY_TOUCH_EPS
            || (v.y - min_y).abs() < BOUNDARY_TOUCH_EPS
            || (v.y - max_y).abs() < BOUNDARY_TOUCH_EPS
    })
}

/// Reports which image side an unbounded FOE region escapes through.
/// A region clear of the expanded search boundary yields `None`.
pub fn detect_unbounded(
    est: &FoeEstimate,
    cam: &CameraModel,
    cfg: &FaithConfig,
) -> EscapeDirection {
    let (min_x, min_y, max_x, max_y) = cfg.search_bounds(cam);
    let eps = BOUNDARY_TOUCH_EPS;
    let mut touched = [false; 4]; // left, right, up, down
    for v in est.region.vertices() {
        if (v.x - min_x).abs() < eps {
            touched[0] = true;
        }
        if (v.x - max_x).abs() < eps {
            touched[1] = true;
        }
        if (v.y - min_y).abs() < eps {
            touched[2] = true;
        }
        if (v.y - max_y).abs() < eps {
            touched[3] = true;
        }
    }
    if !touched.iter().any(|&t| t) {
        return EscapeDirection::None;
    }
    // Among the touched sides, pick the one most aligned with the
    // offset of the region centroid from the image centre.
    let centre = Point2::new(cam.width as f64 / 2.0, cam.height as f64 / 2.0);
    let c = est.region.centroid().unwrap_or(est.foe);
    let candidates = [
        (EscapeDirection::Left, centre.x - c.x, touched[0]),
        (EscapeDirection::Right, c.x - centre.x, touched[1]),
        (EscapeDirection::Up, centre.y - c.y, touched[2]),
        (EscapeDirection::Down, c.y - centre.y, touched[3]),
    ];
    candidates
        .iter()
        .filter(|(_, _, t)| *t)
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(d, _, _)| *d)
        .unwrap_or(EscapeDirection::None)
}
