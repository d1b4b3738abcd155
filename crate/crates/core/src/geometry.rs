//! Planar primitives: points, convex hulls, antipodal pairs and containment.
//!
//! All tolerances are absolute and expressed in distance units. Instances live
//! at unit-square scale, so [`EPS`] sits many orders of magnitude below any
//! grid pitch the generator produces.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Collinearity and containment tolerance.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn dist_sq(self, other: Point) -> f64 {
        let d = self - other;
        d.dot(d)
    }

    /// Unit vector in the same direction. Zero vectors stay zero.
    pub fn unit(self) -> Point {
        let n = self.norm();
        if n == 0.0 {
            self
        } else {
            Point::new(self.x / n, self.y / n)
        }
    }

    /// Counter-clockwise quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn rotated(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    /// Lexicographic (x, then y) comparison.
    pub fn cmp_xy(&self, other: &Point) -> std::cmp::Ordering {
        self.x.total_cmp(&other.x).then(self.y.total_cmp(&other.y))
    }

    /// Lexicographic (y, then x) comparison; the canonical node order.
    pub fn cmp_yx(&self, other: &Point) -> std::cmp::Ordering {
        self.y.total_cmp(&other.y).then(self.x.total_cmp(&other.x))
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Arithmetic mean of a non-empty point set.
pub fn centroid(points: &[Point]) -> Point {
    let n = points.len() as f64;
    let sum = points.iter().fold(Point::default(), |acc, &p| acc + p);
    Point::new(sum.x / n, sum.y / n)
}

/// Signed distance of `p` from the directed line `a -> b`; positive on the left.
fn side(a: Point, b: Point, p: Point) -> f64 {
    let d = b - a;
    d.cross(p - a) / d.norm()
}

/// A strictly convex polygon with counter-clockwise vertices.
///
/// The vertex order given to [`ConvexPolygon::new`] is kept as is; only
/// [`convex_hull`] produces the canonical rotation (starting at the
/// lexicographically smallest vertex).
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::DegenerateInput(format!(
                "polygon needs at least 3 vertices, got {n}"
            )));
        }
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(Error::DegenerateInput(format!("non-finite vertex {p}")));
        }
        for i in 0..n {
            for j in i + 1..n {
                if vertices[i] == vertices[j] {
                    return Err(Error::DegenerateInput(format!(
                        "duplicate vertex {} at indices {i} and {j}",
                        vertices[i]
                    )));
                }
            }
        }
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            if (b - a).cross(c - b) <= 0.0 {
                return Err(Error::DegenerateInput(format!(
                    "vertices {i}..{} do not make a strict left turn",
                    (i + 2) % n
                )));
            }
            // Left turns everywhere still admit self-intersecting stars.
            for (k, &p) in vertices.iter().enumerate() {
                if side(a, b, p) < -EPS {
                    return Err(Error::DegenerateInput(format!(
                        "vertex {k} lies outside edge {i}; polygon is not convex"
                    )));
                }
            }
        }
        Ok(ConvexPolygon { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.vertices.len()]
    }

    /// Edges as `(start, end)` pairs, edge `i` running from vertex `i` to `i + 1`.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        0.5 * self.edges().map(|(a, b)| a.cross(b)).sum::<f64>()
    }

    /// Axis-aligned bounding box as (min corner, max corner).
    pub fn bounding_box(&self) -> (Point, Point) {
        bounding_box(&self.vertices)
    }

    pub fn contains(&self, p: Point) -> bool {
        contains(self, p)
    }

    pub fn translated(&self, offset: Point) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|&v| v + offset).collect(),
        }
    }
}

pub(crate) fn bounding_box(points: &[Point]) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

/// Pair of polygon vertex indices admitting parallel lines of support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AntipodalPair {
    pub i: usize,
    pub j: usize,
}

impl AntipodalPair {
    pub fn new(a: usize, b: usize) -> Self {
        AntipodalPair {
            i: a.min(b),
            j: a.max(b),
        }
    }
}

/// Monotone-chain convex hull.
///
/// Exact duplicates are dropped first; vertices within [`EPS`] of the chord
/// joining their neighbours are treated as collinear and removed. The result
/// is counter-clockwise and starts at the lexicographically smallest point.
pub fn convex_hull(points: &[Point]) -> Result<ConvexPolygon> {
    if let Some(p) = points.iter().find(|p| !p.is_finite()) {
        return Err(Error::DegenerateInput(format!("non-finite point {p}")));
    }
    let mut pts = points.to_vec();
    pts.sort_by(Point::cmp_xy);
    pts.dedup();
    if pts.len() < 3 {
        return Err(Error::DegenerateInput(format!(
            "need at least 3 distinct points, got {}",
            pts.len()
        )));
    }

    // Pop `b` while it is not strictly outside the chord from `a` to `c`.
    let keeps_turn = |a: Point, b: Point, c: Point| side(a, c, b) < -EPS;

    let mut lower: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && !keeps_turn(lower[lower.len() - 2], lower[lower.len() - 1], p) {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && !keeps_turn(upper[upper.len() - 2], upper[upper.len() - 1], p) {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);

    if lower.len() < 3 {
        return Err(Error::DegenerateInput("all points are collinear".into()));
    }
    Ok(ConvexPolygon { vertices: lower })
}

/// True when the points contain at least three non-collinear members.
pub fn spans_area(points: &[Point]) -> bool {
    convex_hull(points).is_ok()
}

/// All antipodal vertex pairs by rotating calipers.
///
/// For every edge the caliper opposite it rests on the vertex (or the two
/// tied vertices, for a parallel edge) farthest from the edge's line; both
/// edge endpoints pair with each such vertex. The farthest pointer only ever
/// advances, so the sweep is linear in the vertex count.
pub fn antipodal_pairs(poly: &ConvexPolygon) -> Vec<AntipodalPair> {
    let v = poly.vertices();
    let n = v.len();
    let height = |e: usize, k: usize| side(v[e % n], v[(e + 1) % n], v[k % n]);

    let mut pairs = Vec::with_capacity(2 * n + 2);
    let mut j = 1usize;
    for i in 0..n {
        let i1 = i + 1;
        if j < i1 {
            j = i1;
        }
        while height(i, j + 1) > height(i, j) {
            j += 1;
        }
        let mut far = vec![j % n];
        let h = height(i, j);
        if (j - 1) % n != i1 % n && h - height(i, j - 1) <= EPS {
            far.push((j - 1) % n);
        }
        if (j + 1) % n != i % n && h - height(i, j + 1) <= EPS {
            far.push((j + 1) % n);
        }
        for &f in &far {
            for e in [i % n, i1 % n] {
                if e != f {
                    pairs.push(AntipodalPair::new(e, f));
                }
            }
        }
    }
    pairs.sort();
    pairs.dedup();
    pairs
}

/// The antipodal pair of maximum separation; ties go to the smallest `(i, j)`.
pub fn diameter(poly: &ConvexPolygon) -> (AntipodalPair, f64) {
    let v = poly.vertices();
    let mut best: Option<(AntipodalPair, f64)> = None;
    for pair in antipodal_pairs(poly) {
        let d = v[pair.i].dist(v[pair.j]);
        match best {
            Some((_, bd)) if d <= bd + 1e-12 => {}
            _ => best = Some((pair, d)),
        }
    }
    best.expect("a convex polygon has at least one antipodal pair")
}

/// Inside-or-on-boundary test with tolerance [`EPS`].
pub fn contains(poly: &ConvexPolygon, p: Point) -> bool {
    poly.edges().all(|(a, b)| side(a, b, p) >= -EPS)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    }

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    #[test]
    fn triangle_hull_is_itself() {
        let hull = convex_hull(&pts(&[(0.0, 0.0), (2.0, 0.0), (1.0, 1.0)])).unwrap();
        assert_eq!(hull.vertices(), pts(&[(0.0, 0.0), (2.0, 0.0), (1.0, 1.0)]).as_slice());
    }

    #[test]
    fn collinear_points_are_degenerate() {
        let err = convex_hull(&pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)])).unwrap_err();
        assert!(matches!(err, Error::DegenerateInput(_)));
    }

    #[test]
    fn duplicates_are_dropped() {
        let hull = convex_hull(&pts(&[
            (0.0, 0.0),
            (0.0, 0.0),
            (1.0, 0.0),
            (1.0, 0.0),
            (0.0, 1.0),
        ]))
        .unwrap();
        assert_eq!(hull.len(), 3);
        assert!(convex_hull(&pts(&[(0.0, 0.0), (0.0, 0.0), (1.0, 1.0)])).is_err());
    }

    #[test]
    fn hull_drops_edge_midpoints_and_interior() {
        let hull = convex_hull(&pts(&[
            (1.0, 1.0),
            (0.0, 0.0),
            (1.0, 0.0),
            (2.0, 0.0),
            (2.0, 2.0),
            (0.0, 2.0),
            (0.0, 1.0),
        ]))
        .unwrap();
        assert_eq!(hull.vertices(), pts(&[(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0)]).as_slice());
    }

    #[test]
    fn polygon_validation() {
        assert!(ConvexPolygon::new(pts(&[(0.0, 0.0), (1.0, 0.0)])).is_err());
        // clockwise
        assert!(ConvexPolygon::new(pts(&[(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)])).is_err());
        // collinear triple
        assert!(ConvexPolygon::new(pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (1.0, 1.0)])).is_err());
        // pentagram: left turns only but self-intersecting
        let star: Vec<Point> = (0..5)
            .map(|k| Point::new(0.0, 1.0).rotated(k as f64 * 4.0 * std::f64::consts::PI / 5.0))
            .collect();
        assert!(ConvexPolygon::new(star).is_err());
    }

    #[test]
    fn square_pairs_are_all_six() {
        let pairs = antipodal_pairs(&unit_square());
        let expected: Vec<_> = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
            .iter()
            .map(|&(i, j)| AntipodalPair { i, j })
            .collect();
        assert_eq!(pairs, expected);
    }

    #[test]
    fn triangle_pairs_are_all_three() {
        let tri = ConvexPolygon::new(pts(&[(0.0, 0.0), (4.0, 0.0), (1.0, 3.0)])).unwrap();
        let pairs = antipodal_pairs(&tri);
        assert_eq!(
            pairs,
            vec![AntipodalPair::new(0, 1), AntipodalPair::new(0, 2), AntipodalPair::new(1, 2)]
        );
    }

    #[test]
    fn diameters() {
        let (pair, d) = diameter(&unit_square());
        assert_eq!(pair, AntipodalPair::new(0, 2));
        assert!((d - 2f64.sqrt()).abs() < 1e-15);

        let tri = ConvexPolygon::new(pts(&[(0.0, 0.0), (4.0, 0.0), (1.0, 3.0)])).unwrap();
        let (pair, d) = diameter(&tri);
        assert_eq!(pair, AntipodalPair::new(1, 2));
        assert!((d - 18f64.sqrt()).abs() < 1e-12);

        let hex: Vec<Point> = (0..6)
            .map(|k| Point::new(1.0, 0.0).rotated(k as f64 * std::f64::consts::PI / 3.0))
            .collect();
        let (pair, d) = diameter(&ConvexPolygon::new(hex).unwrap());
        assert_eq!(pair.j - pair.i, 3);
        assert!((d - 2.0).abs() < 1e-12);
    }

    #[test]
    fn containment_boundary_convention() {
        let sq = unit_square();
        assert!(contains(&sq, Point::new(0.5, 0.5)));
        assert!(contains(&sq, Point::new(1.0, 0.5)));
        assert!(!contains(&sq, Point::new(1.0 + 1e-6, 0.5)));
        assert!(contains(&sq, Point::new(1.0 + 1e-10, 0.5)));
    }
}
