//! Two-dimensional rate regions cut out of the non-negative quadrant by
//! half-planes `a*r1 + b*r2 <= c` with `a, b >= 0`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default tolerance for vertex and membership tests.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid constraint {a}*r1 + {b}*r2 <= {c}")]
    InvalidConstraint { a: f64, b: f64, c: f64 },
    #[error("region is unbounded along the {0} axis")]
    Unbounded(&'static str),
    #[error("region is empty")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlaneConstraint {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl HalfPlaneConstraint {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    pub fn slack(&self, p: RatePoint) -> f64 {
        self.c - self.a * p.r1 - self.b * p.r2
    }

    fn scaled(&self, s: f64) -> Self {
        Self::new(self.a, self.b, self.c * s)
    }
}

/// Rate pair; serialized as `[r1, r2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64)", into = "(f64, f64)")]
pub struct RatePoint {
    pub r1: f64,
    pub r2: f64,
}

impl RatePoint {
    pub fn new(r1: f64, r2: f64) -> Self {
        Self { r1, r2 }
    }

    /// Per-user back-off `([r1 - g]^+, [r2 - g]^+)`.
    pub fn backed_off(&self, g: f64) -> Self {
        Self::new((self.r1 - g).max(0.0), (self.r2 - g).max(0.0))
    }

    fn close_to(&self, other: &RatePoint, eps: f64) -> bool {
        (self.r1 - other.r1).abs() <= eps && (self.r2 - other.r2).abs() <= eps
    }
}

impl From<(f64, f64)> for RatePoint {
    fn from((r1, r2): (f64, f64)) -> Self {
        Self { r1, r2 }
    }
}

impl From<RatePoint> for (f64, f64) {
    fn from(p: RatePoint) -> Self {
        (p.r1, p.r2)
    }
}

/// Convex polygon with its constraint list and counterclockwise vertices,
/// starting from the vertex closest to the origin.
///
/// Deserialization recomputes the vertices from the constraints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RegionRepr")]
pub struct RateRegion {
    constraints: Vec<HalfPlaneConstraint>,
    vertices: Vec<RatePoint>,
}

#[derive(Deserialize)]
struct RegionRepr {
    constraints: Vec<HalfPlaneConstraint>,
    #[serde(default)]
    #[allow(dead_code)]
    vertices: Vec<RatePoint>,
}

impl TryFrom<RegionRepr> for RateRegion {
    type Error = GeometryError;

    fn try_from(repr: RegionRepr) -> Result<Self, Self::Error> {
        build_region(&repr.constraints)
    }
}

impl RateRegion {
    pub fn constraints(&self) -> &[HalfPlaneConstraint] {
        &self.constraints
    }

    pub fn vertices(&self) -> &[RatePoint] {
        &self.vertices
    }

    /// Vertices not weakly dominated by another vertex.
    pub fn dominant_vertices(&self) -> Vec<RatePoint> {
        self.vertices
            .iter()
            .filter(|v| {
                !self.vertices.iter().any(|w| {
                    !w.close_to(v, EPS) && w.r1 >= v.r1 - EPS && w.r2 >= v.r2 - EPS
                })
            })
            .copied()
            .collect()
    }

    pub fn max_sum_rate(&self) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.r1 + v.r2)
            .fold(0.0, f64::max)
    }

    pub fn max_r1(&self) -> f64 {
        self.vertices.iter().map(|v| v.r1).fold(0.0, f64::max)
    }

    pub fn max_r2(&self) -> f64 {
        self.vertices.iter().map(|v| v.r2).fold(0.0, f64::max)
    }

    /// Region scaled by `s > 0` in both coordinates.
    pub fn scaled(&self, s: f64) -> Result<RateRegion, GeometryError> {
        let cs: Vec<_> = self.constraints.iter().map(|h| h.scaled(s)).collect();
        build_region(&cs)
    }

    /// Same region with one more constraint.
    pub fn with_constraint(&self, h: HalfPlaneConstraint) -> Result<RateRegion, GeometryError> {
        let mut cs = self.constraints.clone();
        cs.push(h);
        build_region(&cs)
    }
}

/// Intersects the constraints with the non-negative quadrant.
///
/// Exact duplicates are dropped; redundant constraints stay in the list.
pub fn build_region(constraints: &[HalfPlaneConstraint]) -> Result<RateRegion, GeometryError> {
    let mut cs: Vec<HalfPlaneConstraint> = Vec::with_capacity(constraints.len());
    for &h in constraints {
        let valid = h.a.is_finite()
            && h.b.is_finite()
            && h.c.is_finite()
            && h.a >= 0.0
            && h.b >= 0.0
            && (h.a > 0.0 || h.b > 0.0);
        if !valid {
            return Err(GeometryError::InvalidConstraint { a: h.a, b: h.b, c: h.c });
        }
        if h.c < -EPS {
            return Err(GeometryError::Empty);
        }
        if !cs.contains(&h) {
            cs.push(h);
        }
    }
    if !cs.iter().any(|h| h.a > 0.0) {
        return Err(GeometryError::Unbounded("r1"));
    }
    if !cs.iter().any(|h| h.b > 0.0) {
        return Err(GeometryError::Unbounded("r2"));
    }

    // Boundary lines: every constraint plus the two axes, as (a, b, c) with equality.
    let mut lines: Vec<(f64, f64, f64)> = cs.iter().map(|h| (h.a, h.b, h.c)).collect();
    lines.push((1.0, 0.0, 0.0));
    lines.push((0.0, 1.0, 0.0));

    let mut points: Vec<RatePoint> = Vec::new();
    for i in 0..lines.len() {
        for j in (i + 1)..lines.len() {
            let (a1, b1, c1) = lines[i];
            let (a2, b2, c2) = lines[j];
            let det = a1 * b2 - a2 * b1;
            if det.abs() < 1e-14 {
                continue;
            }
            let p = RatePoint::new((c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det);
            let feasible = p.r1 >= -EPS && p.r2 >= -EPS && cs.iter().all(|h| h.slack(p) >= -EPS);
            if feasible {
                let p = RatePoint::new(p.r1.max(0.0), p.r2.max(0.0));
                if !points.iter().any(|q| q.close_to(&p, EPS)) {
                    points.push(p);
                }
            }
        }
    }
    Ok(RateRegion {
        constraints: cs,
        vertices: order_ccw(points),
    })
}

fn order_ccw(mut points: Vec<RatePoint>) -> Vec<RatePoint> {
    if points.len() < 3 {
        points.sort_by(|p, q| (p.r1 + p.r2).total_cmp(&(q.r1 + q.r2)));
        return points;
    }
    let n = points.len() as f64;
    let cx = points.iter().map(|p| p.r1).sum::<f64>() / n;
    let cy = points.iter().map(|p| p.r2).sum::<f64>() / n;
    points.sort_by(|p, q| {
        let ap = (p.r2 - cy).atan2(p.r1 - cx);
        let aq = (q.r2 - cy).atan2(q.r1 - cx);
        ap.total_cmp(&aq)
    });
    let start = points
        .iter()
        .enumerate()
        .min_by(|(_, p), (_, q)| (p.r1 + p.r2).total_cmp(&(q.r1 + q.r2)))
        .map(|(i, _)| i)
        .unwrap_or(0);
    points.rotate_left(start);
    points
}

/// True iff `p` meets every constraint (and non-negativity) with slack `>= -eps`.
pub fn region_contains(region: &RateRegion, p: RatePoint, eps: f64) -> bool {
    p.r1 >= -eps && p.r2 >= -eps && region.constraints.iter().all(|h| h.slack(p) >= -eps)
}

/// Smallest `g >= 0` such that every outer point backed off by `g` per user lies in `inner`.
///
/// Checking the outer vertices is enough: `inner` is convex and closed under
/// decreasing either rate, and the back-off map is convex per coordinate.
pub fn per_user_gap(outer: &RateRegion, inner: &RateRegion) -> f64 {
    let fits = |g: f64| {
        outer
            .vertices
            .iter()
            .all(|v| region_contains(inner, v.backed_off(g), 1e-12))
    };
    if fits(0.0) {
        return 0.0;
    }
    let mut lo = 0.0;
    let mut hi = outer
        .vertices
        .iter()
        .map(|v| v.r1.max(v.r2))
        .fold(0.0, f64::max);
    for _ in 0..200 {
        if hi - lo <= 1e-13 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if fits(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// True iff each region's vertices lie in the other within `eps`.
pub fn regions_equal(a: &RateRegion, b: &RateRegion, eps: f64) -> bool {
    a.vertices.iter().all(|&v| region_contains(b, v, eps))
        && b.vertices.iter().all(|&v| region_contains(a, v, eps))
}
