//! Brute-force oracles shared by the integration tests. Each one is written
//! independently of the library code it checks.

#![allow(dead_code)]

use farmroute::geometry::{AntipodalPair, ConvexPolygon, Point};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct TestRng(ChaCha8Rng);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.0.next_u64() % (hi - lo + 1) as u64) as usize
    }

    pub fn points(&mut self, n: usize) -> Vec<Point> {
        (0..n).map(|_| Point::new(self.unit(), self.unit())).collect()
    }
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Hull vertices by the O(n^3) edge test: the directed segment (a, b) is a
/// counter-clockwise hull edge when every other point is strictly to its left
/// or lies inside the segment. Distances are measured from the line, with
/// tolerance `tol`. Returns `None` when no point is off the line, and the
/// vertex set sorted by (x, y) otherwise.
pub fn hull_vertices_oracle(points: &[Point], tol: f64) -> Option<Vec<Point>> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    let mut verts: Vec<Point> = Vec::new();
    let mut any_edge = false;
    for &a in &pts {
        for &b in &pts {
            if a == b {
                continue;
            }
            let len = ((b.x - a.x).powi(2) + (b.y - a.y).powi(2)).sqrt();
            let mut strictly_left = false;
            let ok = pts.iter().all(|&c| {
                if c == a || c == b {
                    return true;
                }
                let d = cross(a, b, c) / len;
                if d > tol {
                    strictly_left = true;
                    return true;
                }
                if d < -tol {
                    return false;
                }
                let t = ((c.x - a.x) * (b.x - a.x) + (c.y - a.y) * (b.y - a.y)) / (len * len);
                t > 0.0 && t < 1.0
            });
            if ok && strictly_left {
                any_edge = true;
                for v in [a, b] {
                    if !verts.contains(&v) {
                        verts.push(v);
                    }
                }
            }
        }
    }
    if !any_edge {
        return None;
    }
    verts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    Some(verts)
}

/// Antipodal pairs by sweeping directions. For each direction the sets of
/// vertices maximal and minimal in projection (within `tol`) are recorded and
/// every cross combination is kept. Sampled directions are every edge normal,
/// its opposite, the midpoint of each gap between consecutive normals, and
/// `extra` evenly spaced angles; extremal sets are constant inside the gaps,
/// so this covers every combination the continuum of directions produces.
pub fn antipodal_oracle(poly: &ConvexPolygon, extra: usize, tol: f64) -> Vec<AntipodalPair> {
    let v = poly.vertices();
    let n = v.len();
    let mut angles: Vec<f64> = Vec::new();
    for i in 0..n {
        let a = v[i];
        let b = v[(i + 1) % n];
        let nx = b.y - a.y;
        let ny = -(b.x - a.x);
        let t = ny.atan2(nx);
        angles.push(t.rem_euclid(std::f64::consts::TAU));
        angles.push((t + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU));
    }
    angles.sort_by(f64::total_cmp);
    let m = angles.len();
    for i in 0..m {
        let a = angles[i];
        let b = if i + 1 < m { angles[i + 1] } else { angles[0] + std::f64::consts::TAU };
        angles.push(0.5 * (a + b));
    }
    for s in 0..extra {
        angles.push(s as f64 * std::f64::consts::TAU / extra as f64);
    }

    let mut pairs: Vec<AntipodalPair> = Vec::new();
    for t in angles {
        let (c, s) = (t.cos(), t.sin());
        let proj: Vec<f64> = v.iter().map(|p| p.x * c + p.y * s).collect();
        let hi = proj.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = proj.iter().copied().fold(f64::INFINITY, f64::min);
        let top: Vec<usize> = (0..n).filter(|&i| proj[i] >= hi - tol).collect();
        let bottom: Vec<usize> = (0..n).filter(|&i| proj[i] <= lo + tol).collect();
        for &i in &top {
            for &j in &bottom {
                if i != j {
                    pairs.push(AntipodalPair::new(i, j));
                }
            }
        }
    }
    pairs.sort();
    pairs.dedup();
    pairs
}

/// Shortest Hamiltonian path from `start` to `end` through every point, by
/// enumerating all orders of the interior points (Heap's algorithm).
pub fn shortest_hamiltonian_path(points: &[Point], start: usize, end: usize) -> f64 {
    let mut inner: Vec<usize> = (0..points.len()).filter(|&i| i != start && i != end).collect();
    let d = |a: usize, b: usize| points[a].dist(points[b]);
    let eval = |order: &[usize]| {
        let mut prev = start;
        let mut total = 0.0;
        for &i in order {
            total += d(prev, i);
            prev = i;
        }
        total + d(prev, end)
    };
    let mut best = eval(&inner);
    let k = inner.len();
    let mut c = vec![0usize; k];
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                inner.swap(0, i);
            } else {
                inner.swap(c[i], i);
            }
            best = best.min(eval(&inner));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

pub fn shoelace(poly: &[Point]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a.x * b.y - b.x * a.y
        })
        .sum::<f64>()
        / 2.0
}

/// Area of the intersection of two counter-clockwise convex polygons, by
/// clipping `subject` against each edge of `clip`.
pub fn intersection_area(subject: &[Point], clip: &[Point]) -> f64 {
    let mut out = subject.to_vec();
    let m = clip.len();
    for e in 0..m {
        if out.is_empty() {
            break;
        }
        let (a, b) = (clip[e], clip[(e + 1) % m]);
        let inside = |p: Point| cross(a, b, p) >= 0.0;
        let cut = |p: Point, q: Point| {
            let (dp, dq) = (cross(a, b, p), cross(a, b, q));
            let t = dp / (dp - dq);
            Point::new(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y))
        };
        let input = std::mem::take(&mut out);
        for i in 0..input.len() {
            let cur = input[i];
            let prev = input[(i + input.len() - 1) % input.len()];
            match (inside(prev), inside(cur)) {
                (true, true) => out.push(cur),
                (true, false) => out.push(cut(prev, cur)),
                (false, true) => {
                    out.push(cut(prev, cur));
                    out.push(cur);
                }
                (false, false) => {}
            }
        }
    }
    if out.len() < 3 {
        0.0
    } else {
        shoelace(&out).abs()
    }
}

/// Complete `w` x `h` unit grid, row by row from the bottom.
pub fn grid(w: usize, h: usize) -> Vec<Point> {
    (0..h)
        .flat_map(|y| (0..w).map(move |x| Point::new(x as f64, y as f64)))
        .collect()
}
