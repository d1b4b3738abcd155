//! Back-and-forth routing of a single cluster between an antipodal pair.
//!
//! A candidate sweep is fixed by an antipodal pair of the cluster hull, an
//! orientation (which anchor starts) and a lane direction. Lane directions are
//! the hull edges through either anchor along which both anchors carry
//! parallel supporting lines, so the whole cluster lies between the start
//! anchor's line and the end anchor's line. Nodes are bucketed into lanes
//! parallel to those lines at the grid pitch, and lanes are walked in
//! alternating directions from the start anchor's lane to the end anchor's.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::geometry::{antipodal_pairs, convex_hull, AntipodalPair, ConvexPolygon, Point, EPS};
use crate::solution::{path_length, Route};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    /// Start at vertex `i`, end at vertex `j`.
    Forward,
    /// Start at vertex `j`, end at vertex `i`.
    Reverse,
}

impl Orientation {
    pub const BOTH: [Orientation; 2] = [Orientation::Forward, Orientation::Reverse];

    pub fn anchors(self, pair: AntipodalPair) -> (usize, usize) {
        match self {
            Orientation::Forward => (pair.i, pair.j),
            Orientation::Reverse => (pair.j, pair.i),
        }
    }
}

/// Median nearest-neighbour distance; the lane pitch for foreign instances
/// that do not record their grid spacing.
pub fn estimate_spacing(nodes: &[Point]) -> f64 {
    assert!(nodes.len() >= 2, "spacing needs at least two nodes");
    let mut nn: Vec<f64> = nodes
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &q)| p.dist(q))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    nn.sort_by(f64::total_cmp);
    let m = nn.len();
    if m % 2 == 1 {
        nn[m / 2]
    } else {
        0.5 * (nn[m / 2 - 1] + nn[m / 2])
    }
}

/// Unit lane directions admissible for `pair` on `hull`, in hull-edge order.
///
/// An edge through either anchor qualifies when the two lines parallel to it
/// through the anchors are distinct and enclose every hull vertex.
pub fn lane_directions(hull: &ConvexPolygon, pair: AntipodalPair) -> Vec<Point> {
    let n = hull.len();
    let (a, b) = (hull.vertex(pair.i), hull.vertex(pair.j));
    let mut edges: Vec<usize> = vec![(pair.i + n - 1) % n, pair.i, (pair.j + n - 1) % n, pair.j];
    edges.sort_unstable();
    edges.dedup();

    let mut dirs: Vec<Point> = Vec::new();
    for e in edges {
        let dir = (hull.vertex(e + 1) - hull.vertex(e)).unit();
        let mut w = dir.perp();
        let mut sep = (b - a).dot(w);
        if sep.abs() <= EPS {
            continue;
        }
        if sep < 0.0 {
            w = -w;
            sep = -sep;
        }
        let encloses = hull.vertices().iter().all(|&v| {
            let off = (v - a).dot(w);
            off >= -EPS && off <= sep + EPS
        });
        if encloses && !dirs.iter().any(|d| d.cross(dir).abs() <= EPS) {
            dirs.push(dir);
        }
    }
    dirs
}

struct Lane {
    /// (position along the lane, perpendicular offset, node index), sorted.
    nodes: Vec<(f64, f64, usize)>,
}

impl Lane {
    fn ordered(&self, ascending: bool) -> impl Iterator<Item = usize> + '_ {
        let it = self.nodes.iter().map(|t| t.2);
        let v: Vec<usize> = if ascending { it.collect() } else { it.rev().collect() };
        v.into_iter()
    }
}

/// Moves `start` to the front and `end` to the back of `seq`.
fn pin_ends(seq: &mut Vec<usize>, start: usize, end: usize) {
    seq.retain(|&i| i != start && i != end);
    seq.insert(0, start);
    if end != start {
        seq.push(end);
    }
}

/// Serpentine through `members` from node `start` to node `end`.
///
/// `lane_dir` is the unit direction of the lanes, `spacing` their pitch. The
/// start lane is entered at the end nearer `start` and directions alternate
/// lane by lane. When alternation would not finish on `end`, two repairs are
/// tried and the shorter kept: reversing the final lane, or weaving the last
/// two lanes together rung by rung. Every member appears exactly once, `start`
/// first and `end` last.
pub fn serpentine_route(
    nodes: &[Point],
    members: &[usize],
    start: usize,
    end: usize,
    lane_dir: Point,
    spacing: f64,
) -> Vec<usize> {
    let p = nodes[start];
    let e = lane_dir.unit();
    let mut w = e.perp();
    if (nodes[end] - p).dot(w) < 0.0 {
        w = -w;
    }

    let mut buckets: BTreeMap<i64, Vec<(f64, f64, usize)>> = BTreeMap::new();
    for &m in members {
        let d = nodes[m] - p;
        let off = d.dot(w);
        let lane = (off / spacing).round() as i64;
        buckets.entry(lane).or_default().push((d.dot(e), off, m));
    }
    let mut lanes: Vec<(i64, Lane)> = buckets
        .into_iter()
        .map(|(k, mut v)| {
            v.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)).then(x.2.cmp(&y.2)));
            (k, Lane { nodes: v })
        })
        .collect();

    let lane_of = |lanes: &[(i64, Lane)], node: usize| {
        lanes
            .iter()
            .position(|(_, l)| l.nodes.iter().any(|t| t.2 == node))
            .unwrap()
    };
    if lanes.len() > 1 && lane_of(&lanes, start) == lanes.len() - 1 {
        lanes.reverse();
    }

    let first = &lanes[0].1;
    // Positions are measured from the start node, which sits at zero.
    let lo = first.nodes.first().unwrap().0;
    let hi = first.nodes.last().unwrap().0;
    let first_ascending = -lo <= hi;

    let ascending_at = |idx: usize| (idx % 2 == 0) == first_ascending;
    let m = lanes.len();

    let mut plain: Vec<usize> = Vec::with_capacity(members.len());
    for (idx, (_, lane)) in lanes.iter().enumerate() {
        plain.extend(lane.ordered(ascending_at(idx)));
    }
    if plain.last() == Some(&end) {
        pin_ends(&mut plain, start, end);
        return plain;
    }

    // Repair 1: flip the last lane.
    let mut flipped: Vec<usize> = Vec::with_capacity(members.len());
    for (idx, (_, lane)) in lanes.iter().enumerate() {
        let asc = if idx == m - 1 { !ascending_at(idx) } else { ascending_at(idx) };
        flipped.extend(lane.ordered(asc));
    }
    pin_ends(&mut flipped, start, end);
    if m < 2 {
        return flipped;
    }

    // Repair 2: weave the last two lanes rung by rung.
    let mut woven: Vec<usize> = Vec::with_capacity(members.len());
    for (idx, (_, lane)) in lanes[..m - 2].iter().enumerate() {
        woven.extend(lane.ordered(ascending_at(idx)));
    }
    let asc = ascending_at(m - 2);
    let near_lane = lanes[m - 2].0;
    let mut rungs: BTreeMap<i64, Vec<(i64, f64, usize)>> = BTreeMap::new();
    for (key, lane) in &lanes[m - 2..] {
        let rank = if *key == near_lane { 0 } else { 1 };
        for &(along, _, node) in &lane.nodes {
            let rung = (along / spacing).round() as i64;
            rungs.entry(rung).or_default().push((rank, along, node));
        }
    }
    let mut rung_list: Vec<Vec<(i64, f64, usize)>> = rungs.into_values().collect();
    if !asc {
        rung_list.reverse();
    }
    for (r, mut rung) in rung_list.into_iter().enumerate() {
        rung.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)).then(x.2.cmp(&y.2)));
        if r % 2 == 1 {
            rung.reverse();
        }
        woven.extend(rung.into_iter().map(|t| t.2));
    }
    pin_ends(&mut woven, start, end);

    if path_length(nodes, &woven) < path_length(nodes, &flipped) - 1e-12 {
        woven
    } else {
        flipped
    }
}

/// One scored sweep of a cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub pair: AntipodalPair,
    pub orientation: Orientation,
    /// Index into [`lane_directions`] for the pair.
    pub lane: usize,
    pub order: Vec<usize>,
    /// Path length without depot legs.
    pub internal: f64,
}

/// Convex hull of a cluster with each hull vertex mapped back to a node index
/// (the lowest index among coincident nodes).
pub fn cluster_hull(nodes: &[Point], members: &[usize]) -> Result<(ConvexPolygon, Vec<usize>)> {
    let pts: Vec<Point> = members.iter().map(|&i| nodes[i]).collect();
    let hull = convex_hull(&pts)?;
    let ids = hull
        .vertices()
        .iter()
        .map(|v| {
            members
                .iter()
                .copied()
                .filter(|&i| nodes[i] == *v)
                .min()
                .expect("hull vertices are input points")
        })
        .collect();
    Ok((hull, ids))
}

/// Every (antipodal pair, orientation, lane direction) sweep of a cluster,
/// in lexicographic candidate order.
pub fn sweep_candidates(nodes: &[Point], members: &[usize], spacing: f64) -> Result<Vec<Candidate>> {
    let (hull, ids) = cluster_hull(nodes, members)?;
    let mut out = Vec::new();
    for pair in antipodal_pairs(&hull) {
        let dirs = lane_directions(&hull, pair);
        for orientation in Orientation::BOTH {
            let (s, t) = orientation.anchors(pair);
            for (lane, &dir) in dirs.iter().enumerate() {
                let order = serpentine_route(nodes, members, ids[s], ids[t], dir, spacing);
                let internal = path_length(nodes, &order);
                out.push(Candidate {
                    pair,
                    orientation,
                    lane,
                    order,
                    internal,
                });
            }
        }
    }
    Ok(out)
}

/// Routes one cluster: the sweep candidate with the shortest closed tour
/// through the depot. Ties keep the lexicographically first candidate.
pub fn route_cluster(nodes: &[Point], members: &[usize], depot: Point, spacing: f64) -> Result<Route> {
    let mut best: Option<(f64, Vec<usize>)> = None;
    for c in sweep_candidates(nodes, members, spacing)? {
        let score = depot.dist(nodes[c.order[0]]) + c.internal + nodes[*c.order.last().unwrap()].dist(depot);
        match &best {
            Some((b, _)) if score >= b - 1e-12 => {}
            _ => best = Some((score, c.order)),
        }
    }
    let (_, order) = best.expect("a valid cluster has at least one antipodal pair");
    Ok(Route::new(depot, nodes, order))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(w: usize, h: usize) -> Vec<Point> {
        let mut v = Vec::new();
        for y in 0..h {
            for x in 0..w {
                v.push(Point::new(x as f64, y as f64));
            }
        }
        v
    }

    fn at(nodes: &[Point], x: f64, y: f64) -> usize {
        nodes.iter().position(|p| *p == Point::new(x, y)).unwrap()
    }

    #[test]
    fn spacing_estimates() {
        assert_eq!(estimate_spacing(&grid(3, 3)), 1.0);
        assert_eq!(estimate_spacing(&[Point::new(0.0, 0.0), Point::new(3.0, 4.0)]), 5.0);
    }

    #[test]
    fn single_lane() {
        let nodes = vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(2.0, 0.0)];
        let order = serpentine_route(&nodes, &[0, 1, 2], 0, 2, Point::new(1.0, 0.0), 1.0);
        assert_eq!(order, vec![0, 1, 2]);
        assert_eq!(path_length(&nodes, &order), 2.0);
    }

    #[test]
    fn three_by_three_corner_sweep() {
        let nodes = grid(3, 3);
        let members: Vec<usize> = (0..9).collect();
        let order = serpentine_route(&nodes, &members, 0, 8, Point::new(1.0, 0.0), 1.0);
        let expected: Vec<usize> = [(0., 0.), (1., 0.), (2., 0.), (2., 1.), (1., 1.), (0., 1.), (0., 2.), (1., 2.), (2., 2.)]
            .iter()
            .map(|&(x, y)| at(&nodes, x, y))
            .collect();
        assert_eq!(order, expected);
        assert_eq!(path_length(&nodes, &order), 8.0);
    }

    #[test]
    fn two_by_two_diagonal() {
        let nodes = grid(2, 2);
        let order = serpentine_route(&nodes, &[0, 1, 2, 3], 0, 3, Point::new(1.0, 0.0), 1.0);
        assert_eq!(order.first(), Some(&0));
        assert_eq!(order.last(), Some(&3));
        assert!((path_length(&nodes, &order) - (2.0 + 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn same_side_anchors_weave_the_last_lanes() {
        let nodes = grid(3, 3);
        let members: Vec<usize> = (0..9).collect();
        let order = serpentine_route(&nodes, &members, at(&nodes, 0., 0.), at(&nodes, 2., 0.), Point::new(0.0, 1.0), 1.0);
        assert_eq!(path_length(&nodes, &order), 8.0);
        assert_eq!(*order.last().unwrap(), at(&nodes, 2., 0.));
    }

    #[test]
    fn lane_directions_of_a_rectangle() {
        let hull = ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap();
        // Opposite corners admit both axis directions.
        assert_eq!(lane_directions(&hull, AntipodalPair::new(0, 2)).len(), 2);
        // Bottom corners only admit vertical lanes.
        let d = lane_directions(&hull, AntipodalPair::new(0, 1));
        assert_eq!(d.len(), 1);
        assert!(d[0].x.abs() < 1e-12);
    }

    #[test]
    fn route_cluster_rescoring_matches() {
        let ring: Vec<Point> = (0..6)
            .map(|k| Point::new(1.0, 0.0).rotated(k as f64 * std::f64::consts::PI / 3.0))
            .collect();
        let members: Vec<usize> = (0..6).collect();
        let depot = Point::new(0.0, -4.0);
        let route = route_cluster(&ring, &members, depot, 1.0).unwrap();
        let rescored = crate::solution::route_length(depot, &ring, &route.nodes);
        assert!((rescored - route.length).abs() <= 1e-12 * route.length);
        let best = sweep_candidates(&ring, &members, 1.0)
            .unwrap()
            .iter()
            .map(|c| depot.dist(ring[c.order[0]]) + c.internal + ring[*c.order.last().unwrap()].dist(depot))
            .fold(f64::INFINITY, f64::min);
        assert!((route.length - best).abs() < 1e-12);
    }
}
