//! Exact 2D primitives for half-planes and convex polygons.
//!
//! A [`HalfPlane`] is stored as an anchor point plus an outward unit
//! normal; a point is inside iff `(p - anchor) . normal <= 0`. Convex
//! regions are clipped against half-planes with Sutherland-Hodgman.
//! All operations are pure functions on immutable values.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Vertices on the clip boundary within this distance are kept.
const BOUNDARY_EPS: f64 = 1e-9;

/// Polygons below this area are treated as empty (avoids centroid
/// blow-up on slivers).
pub const EMPTY_AREA_EPS: f64 = 1e-6;

/// A point on the image plane, in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: &Point2) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }
}

/// Half-plane delimited by the line through `anchor` orthogonal to
/// `normal`. The normal points out of the half-plane, into the
/// excluded side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub anchor: Point2,
    /// Unit vector pointing out of the half-plane.
    pub normal: (f64, f64),
}

impl HalfPlane {
    /// Builds the half-plane from an anchor and an (unnormalized)
    /// outward direction.
    pub fn new(anchor: Point2, direction: (f64, f64)) -> Result<Self> {
        let mag = (direction.0 * direction.0 + direction.1 * direction.1).sqrt();
        if !mag.is_finite() || mag == 0.0 {
            return Err(Error::DegenerateInput(
                "half-plane direction has zero magnitude".into(),
            ));
        }
        Ok(HalfPlane {
            anchor,
            normal: (direction.0 / mag, direction.1 / mag),
        })
    }

    /// Negative half-plane of a flow measurement: anchored at the
    /// vector's position, excluding the side the flow points towards.
    /// The focus of expansion of an expanding flow field lies inside.
    pub fn negative_of_flow(pos: Point2, u: f64, v: f64) -> Result<Self> {
        HalfPlane::new(pos, (u, v))
    }

    /// Signed distance from the boundary line; negative means inside.
    pub fn signed_distance(&self, p: &Point2) -> f64 {
        (p.x - self.anchor.x) * self.normal.0 + (p.y - self.anchor.y) * self.normal.1
    }

    pub fn contains(&self, p: &Point2) -> bool {
        self.signed_distance(p) <= 0.0
    }

    /// Containment with slack, used when scoring centroids that may sit
    /// exactly on a defining boundary.
    pub fn contains_with_slack(&self, p: &Point2, slack: f64) -> bool {
        self.signed_distance(p) <= slack
    }
}

/// Convex polygon with counter-clockwise vertex order. Fewer than
/// three vertices means an empty region.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
}

impl ConvexPolygon {
    /// Builds a polygon from CCW vertices. No convexity check is
    /// performed; callers construct from rectangles and clips, which
    /// preserve convexity.
    pub fn new(vertices: Vec<Point2>) -> Self {
        ConvexPolygon { vertices }
    }

    pub fn empty() -> Self {
        ConvexPolygon { vertices: vec![] }
    }

    /// Axis-aligned rectangle, CCW.
    pub fn rectangle(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Self {
        ConvexPolygon {
            vertices: vec![
                Point2::new(min_x, min_y),
                Point2::new(max_x, min_y),
                Point2::new(max_x, max_y),
                Point2::new(min_x, max_y),
            ],
        }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() < 3 || self.area() < EMPTY_AREA_EPS
    }

    /// Shoelace area, non-negative for CCW input. Degenerate polygons
    /// report zero.
    pub fn area(&self) -> f64 {
        if self.vertices.len() < 3 {
            return 0.0;
        }
        let mut twice = 0.0;
        for i in 0..self.vertices.len() {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % self.vertices.len()];
            twice += a.x * b.y - b.x * a.y;
        }
        (twice / 2.0).max(0.0)
    }

    /// Area-weighted centroid. Errors on empty or sliver regions.
    pub fn centroid(&self) -> Result<Point2> {
        let area = self.area();
        if self.vertices.len() < 3 || area < EMPTY_AREA_EPS {
            return Err(Error::NoCentroid);
        }
        let mut cx = 0.0;
        let mut cy = 0.0;
        for i in 0..self.vertices.len() {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % self.vertices.len()];
            let cross = a.x * b.y - b.x * a.y;
            cx += (a.x + b.x) * cross;
            cy += (a.y + b.y) * cross;
        }
        let scale = 1.0 / (6.0 * area);
        Ok(Point2::new(cx * scale, cy * scale))
    }

    /// Point-in-polygon test via edge half-plane membership, with a
    /// small boundary tolerance.
    pub fn contains(&self, p: &Point2, tol: f64) -> bool {
        if self.vertices.len() < 3 {
            return false;
        }
        for i in 0..self.vertices.len() {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % self.vertices.len()];
            let cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
            // CCW polygon: interior points have non-negative cross.
            if cross < -tol {
                return false;
            }
        }
        true
    }

    /// Clips the polygon against a half-plane (Sutherland-Hodgman).
    /// The result is the intersection, still convex and CCW; clipping
    /// is idempotent and an empty result is a valid empty polygon.
    pub fn clip(&self, h: &HalfPlane) -> ConvexPolygon {
        if self.vertices.is_empty() {
            return ConvexPolygon::empty();
        }
        let n = self.vertices.len();
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let cur = &self.vertices[i];
            let next = &self.vertices[(i + 1) % n];
            let d_cur = h.signed_distance(cur);
            let d_next = h.signed_distance(next);
            let cur_in = d_cur <= BOUNDARY_EPS;
            let next_in = d_next <= BOUNDARY_EPS;
            if cur_in {
                out.push(*cur);
            }
            if cur_in != next_in {
                // Edge crosses the boundary; emit the intersection.
                let t = d_cur / (d_cur - d_next);
                out.push(Point2::new(
                    cur.x + t * (next.x - cur.x),
                    cur.y + t * (next.y - cur.y),
                ));
            }
        }
        if out.len() < 3 {
            return ConvexPolygon::empty();
        }
        ConvexPolygon { vertices: out }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn unit_square() -> ConvexPolygon {
        ConvexPolygon::rectangle(0.0, 0.0, 1.0, 1.0)
    }

    /// {x <= c}
    fn x_leq(c: f64) -> HalfPlane {
        HalfPlane::new(Point2::new(c, 0.0), (1.0, 0.0)).unwrap()
    }

    #[test]
    fn negative_half_plane_axis_aligned() {
        let h = HalfPlane::negative_of_flow(Point2::new(10.0, 0.0), 1.0, 0.0).unwrap();
        assert!(h.contains(&Point2::new(5.0, 0.0)));
        assert!(!h.contains(&Point2::new(15.0, 0.0)));
    }

    #[test]
    fn negative_half_plane_normalizes_and_signs() {
        let h = HalfPlane::negative_of_flow(Point2::new(0.0, 0.0), 0.0, -2.0).unwrap();
        assert_relative_eq!(h.normal.1, -1.0, epsilon = 1e-12);
        // {y >= 0}
        assert!(h.contains(&Point2::new(3.0, 1.0)));
        assert!(!h.contains(&Point2::new(3.0, -1.0)));
    }

    #[test]
    fn negative_half_plane_zero_flow_is_error() {
        assert!(HalfPlane::negative_of_flow(Point2::new(0.0, 0.0), 0.0, 0.0).is_err());
    }

    #[test]
    fn radial_flow_half_plane_contains_foe_even_under_aperture() {
        // f = c (p - foe) projected on any edge normal still keeps the
        // FOE on the inside.
        let foe = Point2::new(33.0, -7.0);
        let mut angle = 0.1f64;
        for i in 0..50 {
            let p = Point2::new((i as f64) * 3.1 - 60.0, (i as f64) * 1.7 - 40.0);
            if p.distance(&foe) < 1e-6 {
                continue;
            }
            let f = (2.0 * (p.x - foe.x), 2.0 * (p.y - foe.y));
            angle += 1.37;
            let n = (angle.cos(), angle.sin());
            let dot = f.0 * n.0 + f.1 * n.1;
            if dot.abs() < 1e-9 {
                continue;
            }
            let proj = (dot * n.0, dot * n.1);
            let h = HalfPlane::negative_of_flow(p, proj.0, proj.1).unwrap();
            assert!(h.contains_with_slack(&foe, 1e-9));
        }
    }

    #[test]
    fn clip_unit_square_in_half() {
        let clipped = unit_square().clip(&x_leq(0.5));
        assert_relative_eq!(clipped.area(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn clip_noop_when_contained() {
        let clipped = unit_square().clip(&x_leq(2.0));
        assert_relative_eq!(clipped.area(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn clip_disjoint_is_empty() {
        let clipped = unit_square().clip(&x_leq(-1.0));
        assert!(clipped.is_empty());
        assert_eq!(clipped.area(), 0.0);
    }

    #[test]
    fn clip_is_idempotent() {
        let h = HalfPlane::new(Point2::new(0.3, 0.2), (0.6, 0.8)).unwrap();
        let once = unit_square().clip(&h);
        let twice = once.clip(&h);
        assert_relative_eq!(once.area(), twice.area(), epsilon = 1e-9);
    }

    #[test]
    fn area_examples() {
        assert_relative_eq!(unit_square().area(), 1.0);
        let tri = ConvexPolygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(0.0, 2.0),
        ]);
        assert_relative_eq!(tri.area(), 2.0);
        let degenerate = ConvexPolygon::new(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)]);
        assert_eq!(degenerate.area(), 0.0);
    }

    #[test]
    fn centroid_examples() {
        let c = unit_square().centroid().unwrap();
        assert_relative_eq!(c.x, 0.5, epsilon = 1e-12);
        assert_relative_eq!(c.y, 0.5, epsilon = 1e-12);

        let tri = ConvexPolygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(3.0, 0.0),
            Point2::new(0.0, 3.0),
        ]);
        let c = tri.centroid().unwrap();
        assert_relative_eq!(c.x, 1.0, epsilon = 1e-12);
        assert_relative_eq!(c.y, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn centroid_translation_equivariance() {
        let shifted = ConvexPolygon::rectangle(10.0, 20.0, 11.0, 21.0);
        let c = shifted.centroid().unwrap();
        assert_relative_eq!(c.x, 10.5, epsilon = 1e-12);
        assert_relative_eq!(c.y, 20.5, epsilon = 1e-12);
    }

    #[test]
    fn centroid_of_empty_is_error() {
        assert!(ConvexPolygon::empty().centroid().is_err());
    }

    fn arb_halfplane() -> impl Strategy<Value = HalfPlane> {
        (
            -20.0f64..20.0,
            -20.0f64..20.0,
            0.0f64..std::f64::consts::TAU,
        )
            .prop_map(|(x, y, a)| {
                HalfPlane::new(Point2::new(x, y), (a.cos(), a.sin())).unwrap()
            })
    }

    fn arb_polygon() -> impl Strategy<Value = ConvexPolygon> {
        // Random rectangle clipped by a couple of half-planes gives a
        // generic convex polygon.
        (
            -15.0f64..0.0,
            -15.0f64..0.0,
            0.1f64..15.0,
            0.1f64..15.0,
            proptest::collection::vec(arb_halfplane(), 0..3),
        )
            .prop_map(|(x0, y0, w, h, cuts)| {
                let mut poly = ConvexPolygon::rectangle(x0, y0, x0 + w, y0 + h);
                for cut in &cuts {
                    poly = poly.clip(cut);
                }
                poly
            })
    }

    proptest! {
        #[test]
        fn containment_clip_consistency(
            poly in arb_polygon(),
            h in arb_halfplane(),
            px in -25.0f64..25.0,
            py in -25.0f64..25.0,
        ) {
            let p = Point2::new(px, py);
            let clipped = poly.clip(&h);
            // Skip points near any boundary where float membership is
            // genuinely ambiguous.
            prop_assume!(h.signed_distance(&p).abs() > 1e-6);
            let expected = poly.contains(&p, 1e-6) && h.contains(&p);
            let near_edge = |poly: &ConvexPolygon| {
                poly.vertices().iter().enumerate().any(|(i, a)| {
                    let b = &poly.vertices()[(i + 1) % poly.vertices().len()];
                    let e = (b.x - a.x, b.y - a.y);
                    let len = (e.0 * e.0 + e.1 * e.1).sqrt();
                    if len < 1e-12 { return false; }
                    let cross = e.0 * (p.y - a.y) - e.1 * (p.x - a.x);
                    (cross / len).abs() < 1e-6
                })
            };
            prop_assume!(!near_edge(&poly) && !near_edge(&clipped));
            prop_assert_eq!(clipped.contains(&p, 1e-6), expected);
        }

        #[test]
        fn area_monotone_under_clip(poly in arb_polygon(), h in arb_halfplane()) {
            prop_assert!(poly.clip(&h).area() <= poly.area() + 1e-9);
        }

        #[test]
        fn clip_order_independence(
            poly in arb_polygon(),
            cuts in proptest::collection::vec(arb_halfplane(), 2..5),
            swap in proptest::sample::Index::arbitrary(),
        ) {
            let forward = cuts.iter().fold(poly.clone(), |r, h| r.clip(h));
            let mut shuffled = cuts.clone();
            let i = swap.index(shuffled.len());
            shuffled.swap(0, i);
            shuffled.reverse();
            let backward = shuffled.iter().fold(poly, |r, h| r.clip(h));
            let a = forward.area();
            let b = backward.area();
            prop_assert!((a - b).abs() <= 1e-6 * a.max(b).max(1.0));
        }

        #[test]
        fn centroid_lies_in_defining_half_planes(
            poly in arb_polygon(),
            cuts in proptest::collection::vec(arb_halfplane(), 1..4),
        ) {
            let clipped = cuts.iter().fold(poly, |r, h| r.clip(h));
            if let Ok(c) = clipped.centroid() {
                for h in &cuts {
                    prop_assert!(h.contains_with_slack(&c, 1e-6));
                }
            }
        }
    }
}
