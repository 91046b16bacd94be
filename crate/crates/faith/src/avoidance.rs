//! Time-to-contact from flow and FOE, DBSCAN clustering on
//! position+TTC features, and the roll-command avoidance decision.

use serde::Serialize;

use crate::flow::{CameraModel, FlowVector};
use crate::geometry::Point2;
use crate::{Error, Result};

/// One TTC measurement derived from a flow vector.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TtcSample {
    pub pos: Point2,
    /// Seconds; clipped to the configured ceiling.
    pub ttc: f64,
    /// 1/seconds; the reciprocal of the unclipped TTC.
    pub divergence: f64,
}

/// Axis-aligned pixel rectangle.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Bbox {
    pub min: Point2,
    pub max: Point2,
}

impl Bbox {
    fn around(points: impl Iterator<Item = Point2>) -> Option<Bbox> {
        let mut bbox: Option<Bbox> = None;
        for p in points {
            bbox = Some(match bbox {
                None => Bbox { min: p, max: p },
                Some(b) => Bbox {
                    min: Point2::new(b.min.x.min(p.x), b.min.y.min(p.y)),
                    max: Point2::new(b.max.x.max(p.x), b.max.y.max(p.y)),
                },
            });
        }
        bbox
    }

    pub fn contains(&self, p: &Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn center(&self) -> Point2 {
        Point2::new(
            (self.min.x + self.max.x) / 2.0,
            (self.min.y + self.max.y) / 2.0,
        )
    }
}

/// A DBSCAN cluster over TTC samples.
#[derive(Debug, Clone, Serialize)]
pub struct Cluster {
    pub id: usize,
    /// Indices into the sample list.
    pub members: Vec<usize>,
    pub mean_ttc: f64,
    pub bbox: Bbox,
}

/// Which way to roll, if at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RollSign {
    Left,
    Right,
    None,
}

/// Outcome of the obstacle-avoidance decision.
#[derive(Debug, Clone, Serialize)]
pub struct AvoidanceDecision {
    pub avoid: bool,
    pub roll_sign: RollSign,
    /// Fixed-length roll command, seconds.
    pub duration: f64,
    /// The lowest-mean-TTC cluster.
    pub obstacle: Cluster,
    pub foe_in_bbox: bool,
}

/// DBSCAN parameters plus the TTC clip ceiling applied upstream.
#[derive(Debug, Clone, Copy)]
pub struct DbscanParams {
    pub eps: f64,
    pub min_pts: usize,
    /// Ceiling for clipped TTC values, seconds.
    pub ttc_clip: f64,
}

impl Default for DbscanParams {
    fn default() -> Self {
        DbscanParams {
            eps: 0.2,
            min_pts: 20,
            ttc_clip: 10.0,
        }
    }
}

impl DbscanParams {
    pub fn validate(&self) -> Result<()> {
        if self.eps <= 0.0 || self.min_pts < 1 || self.ttc_clip <= 0.0 {
            return Err(Error::Domain(
                "dbscan requires eps > 0, min_pts >= 1, ttc_clip > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Computes per-vector TTC from the flow and an FOE location.
///
/// The divergence uses whichever axis has the larger distance to the
/// FOE (the better-conditioned denominator). Non-positive divergence
/// (receding or distant surface) maps to the clip ceiling; vectors
/// exactly at the FOE are dropped.
pub fn compute_ttc(flow: &[FlowVector], foe: &Point2, clip: f64) -> Vec<TtcSample> {
    flow.iter()
        .filter_map(|f| {
            let dx = f.pos.x - foe.x;
            let dy = f.pos.y - foe.y;
            if dx == 0.0 && dy == 0.0 {
                return None;
            }
            let divergence = if dx.abs() >= dy.abs() {
                f.u / dx
            } else {
                f.v / dy
            };
            let ttc = if divergence > 0.0 {
                (1.0 / divergence).clamp(0.0, clip)
            } else {
                clip
            };
            Some(TtcSample {
                pos: f.pos,
                ttc,
                divergence,
            })
        })
        .collect()
}

/// Feature triples for clustering: image coordinates normalized to
/// [0, 1] and the TTC z-scored over the sample set (zero if the TTC
/// variance vanishes).
pub fn build_features(samples: &[TtcSample], cam: &CameraModel) -> Result<Vec<[f64; 3]>> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 TTC samples to normalize, got {}",
            samples.len()
        )));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().map(|s| s.ttc).sum::<f64>() / n;
    let var = samples.iter().map(|s| (s.ttc - mean).powi(2)).sum::<f64>() / n;
    let std = var.sqrt();
    Ok(samples
        .iter()
        .map(|s| {
            let z = if std > 0.0 { (s.ttc - mean) / std } else { 0.0 };
            [s.pos.x / cam.width as f64, s.pos.y / cam.height as f64, z]
        })
        .collect())
}

/// Cluster memberships plus the noise set, as sample indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DbscanResult {
    pub clusters: Vec<Vec<usize>>,
    pub noise: Vec<usize>,
}

/// Standard DBSCAN with Euclidean distance. A point is core iff its
/// eps-neighborhood (itself included) holds at least `min_pts` points;
/// clusters are connected core points plus reachable border points.
/// Deterministic for a given input order: clusters are discovered in
/// index order and a border point reachable from several clusters goes
/// to the first one discovered.
pub fn dbscan(features: &[[f64; 3]], params: &DbscanParams) -> Result<DbscanResult> {
    params.validate()?;
    let n = features.len();
    let eps2 = params.eps * params.eps;
    let dist2 = |a: usize, b: usize| {
        features[a]
            .iter()
            .zip(&features[b])
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
    };
    let neighbors = |i: usize| -> Vec<usize> {
        (0..n).filter(|&j| dist2(i, j) <= eps2).collect()
    };

    const UNLABELED: usize = usize::MAX;
    const NOISE: usize = usize::MAX - 1;
    let mut labels = vec![UNLABELED; n];
    let mut clusters: Vec<Vec<usize>> = Vec::new();

    for i in 0..n {
        if labels[i] != UNLABELED {
            continue;
        }
        let nbrs = neighbors(i);
        if nbrs.len() < params.min_pts {
            labels[i] = NOISE;
            continue;
        }
        let id = clusters.len();
        labels[i] = id;
        let mut members = vec![i];
        let mut queue: std::collections::VecDeque<usize> = nbrs.into();
        while let Some(j) = queue.pop_front() {
            if labels[j] == NOISE {
                // Border point previously marked noise.
                labels[j] = id;
                members.push(j);
                continue;
            }
            if labels[j] != UNLABELED {
                continue;
            }
            labels[j] = id;
            members.push(j);
            let jn = neighbors(j);
            if jn.len() >= params.min_pts {
                queue.extend(jn);
            }
        }
        members.sort_unstable();
        clusters.push(members);
    }

    let noise = (0..n).filter(|&i| labels[i] == NOISE).collect();
    Ok(DbscanResult { clusters, noise })
}

/// Attaches mean TTC and bounding box to raw cluster memberships.
pub fn annotate_clusters(samples: &[TtcSample], result: &DbscanResult) -> Vec<Cluster> {
    result
        .clusters
        .iter()
        .enumerate()
        .map(|(id, members)| {
            let mean_ttc =
                members.iter().map(|&i| samples[i].ttc).sum::<f64>() / members.len() as f64;
            let bbox = Bbox::around(members.iter().map(|&i| samples[i].pos))
                .expect("dbscan clusters are non-empty");
            Cluster {
                id,
                members: members.clone(),
                mean_ttc,
                bbox,
            }
        })
        .collect()
}

/// Full clustering pipeline: features, DBSCAN, annotation.
pub fn cluster_ttc_samples(
    samples: &[TtcSample],
    cam: &CameraModel,
    params: &DbscanParams,
) -> Result<(Vec<Cluster>, Vec<usize>)> {
    let features = build_features(samples, cam)?;
    let result = dbscan(&features, params)?;
    Ok((annotate_clusters(samples, &result), result.noise))
}

/// Decides whether to issue the 1.5 s roll command. The obstacle is
/// the lowest-mean-TTC cluster; avoidance triggers when the FOE falls
/// inside its bounding box and its mean TTC is below the threshold.
/// The roll points towards the cluster with the highest mean TTC.
pub fn decide_avoidance(
    clusters: &[Cluster],
    foe: &Point2,
    ttc_threshold: f64,
) -> Result<AvoidanceDecision> {
    let obstacle = clusters
        .iter()
        .min_by(|a, b| a.mean_ttc.total_cmp(&b.mean_ttc))
        .ok_or(Error::NoClusters)?;
    let foe_in_bbox = obstacle.bbox.contains(foe);
    let avoid = foe_in_bbox && obstacle.mean_ttc < ttc_threshold;
    let roll_sign = if avoid {
        let escape = clusters
            .iter()
            .max_by(|a, b| a.mean_ttc.total_cmp(&b.mean_ttc))
            .expect("non-empty cluster list");
        if escape.bbox.center().x >= foe.x {
            RollSign::Right
        } else {
            RollSign::Left
        }
    } else {
        RollSign::None
    };
    Ok(AvoidanceDecision {
        avoid,
        roll_sign,
        duration: 1.5,
        obstacle: obstacle.clone(),
        foe_in_bbox,
    })
}
