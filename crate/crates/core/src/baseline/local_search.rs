use std::f64::consts::TAU;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::geometry::{centroid, Point};
use crate::instances::FarmInstance;
use crate::solution::{Route, Solution};

use super::DistanceMatrix;

pub const ALGORITHM: &str = "minmax-ls";

/// Nodes of the longest route considered for relocation per iteration.
const RELOCATE_CANDIDATES: usize = 10;
const IMPROVEMENT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverBudget {
    pub max_iterations: usize,
    pub time_limit: Option<Duration>,
}

impl Default for SolverBudget {
    fn default() -> Self {
        SolverBudget {
            max_iterations: 1000,
            time_limit: None,
        }
    }
}

/// 2-opt on the closed tour depot -> route -> depot until no reversal
/// shortens it. The depot stays fixed at both ends.
pub fn two_opt(route: &mut [usize], dm: &DistanceMatrix) {
    let m = route.len();
    if m < 2 {
        return;
    }
    let d = dm.depot();
    // Position p in the closed sequence: 0 and m + 1 are the depot.
    let at = |r: &[usize], p: usize| if p == 0 || p == m + 1 { d } else { r[p - 1] };
    loop {
        let mut improved = false;
        for i in 0..m {
            for j in i + 2..=m {
                let (a, b) = (at(route, i), at(route, i + 1));
                let (c, e) = (at(route, j), at(route, j + 1));
                let delta = dm.get(a, c) + dm.get(b, e) - dm.get(a, b) - dm.get(c, e);
                if delta < -IMPROVEMENT {
                    route[i..j].reverse();
                    improved = true;
                }
            }
        }
        if !improved {
            return;
        }
    }
}

fn nearest_neighbour(members: &[usize], dm: &DistanceMatrix) -> Vec<usize> {
    let mut left: Vec<usize> = members.to_vec();
    left.sort_unstable();
    let mut out = Vec::with_capacity(left.len());
    let mut cur = dm.depot();
    while !left.is_empty() {
        let mut best = 0;
        for (k, &i) in left.iter().enumerate() {
            if dm.get(cur, i) < dm.get(cur, left[best]) {
                best = k;
            }
        }
        cur = left.remove(best);
        out.push(cur);
    }
    out
}

/// Splits nodes into `k` angular sectors of near-equal size around the depot,
/// starting from node 0's bearing. Bearing ties are broken by radius.
fn sector_sweep(nodes: &[Point], depot: Point, k: usize) -> Vec<Vec<usize>> {
    let bearing = |p: Point| {
        let d = p - depot;
        d.y.atan2(d.x)
    };
    let start = bearing(nodes[0]);
    let mut order: Vec<(f64, f64, usize)> = nodes
        .iter()
        .enumerate()
        .map(|(i, &p)| ((bearing(p) - start).rem_euclid(TAU), p.dist(depot), i))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));

    let n = nodes.len();
    let mut out = Vec::with_capacity(k);
    let mut it = order.into_iter().map(|t| t.2);
    for r in 0..k {
        let size = n / k + usize::from(r < n % k);
        out.push(it.by_ref().take(size).collect());
    }
    out
}

/// Cheapest position to insert `x` into the closed tour `route`:
/// `(position, added length)`.
fn cheapest_insertion(route: &[usize], x: usize, dm: &DistanceMatrix) -> (usize, f64) {
    let d = dm.depot();
    let mut best = (0, f64::INFINITY);
    for pos in 0..=route.len() {
        let a = if pos == 0 { d } else { route[pos - 1] };
        let b = if pos == route.len() { d } else { route[pos] };
        let delta = dm.get(a, x) + dm.get(x, b) - dm.get(a, b);
        if delta < best.1 {
            best = (pos, delta);
        }
    }
    best
}

fn removal_gain(route: &[usize], pos: usize, dm: &DistanceMatrix) -> f64 {
    let d = dm.depot();
    let a = if pos == 0 { d } else { route[pos - 1] };
    let b = if pos + 1 == route.len() { d } else { route[pos + 1] };
    let x = route[pos];
    dm.get(a, x) + dm.get(x, b) - dm.get(a, b)
}

fn max_with_index(lengths: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, &l) in lengths.iter().enumerate() {
        if l > best.1 {
            best = (i, l);
        }
    }
    best
}

/// Sector sweep, nearest-neighbour tours with 2-opt, then relocation out of
/// the longest route while that strictly lowers the maximum.
pub fn minmax_local_search(inst: &FarmInstance, k: usize, seed: u64, budget: SolverBudget) -> Result<Solution> {
    minmax_local_search_traced(inst, k, seed, budget).map(|(s, _)| s)
}

/// As [`minmax_local_search`], also returning the maximum route length before
/// relocation and after every accepted move.
///
/// Each iteration takes the longest route, picks its 10 nodes closest to the
/// centroid of some other route, and scores moving each of them to every other
/// route (removal gain against cheapest insertion). The best move that lowers
/// the estimated maximum is applied, ties broken by (node, target route), and
/// both touched routes are re-optimised with 2-opt. 2-opt only shortens
/// tours, so the realised maximum never exceeds the estimate.
pub fn minmax_local_search_traced(
    inst: &FarmInstance,
    k: usize,
    seed: u64,
    budget: SolverBudget,
) -> Result<(Solution, Vec<f64>)> {
    let n = inst.nodes.len();
    if k == 0 || k > n {
        return Err(Error::InvalidK {
            k,
            reason: format!("need 1 <= k <= {n} nodes"),
        });
    }
    let started = Instant::now();
    let dm = DistanceMatrix::new(&inst.nodes, inst.depot);

    let mut routes: Vec<Vec<usize>> = sector_sweep(&inst.nodes, inst.depot, k)
        .iter()
        .map(|members| {
            let mut r = nearest_neighbour(members, &dm);
            two_opt(&mut r, &dm);
            r
        })
        .collect();
    let mut lengths: Vec<f64> = routes.iter().map(|r| dm.tour(r)).collect();
    let mut trace = vec![max_with_index(&lengths).1];

    for _ in 0..budget.max_iterations {
        if budget.time_limit.is_some_and(|t| started.elapsed() >= t) {
            break;
        }
        let (longest, cur_max) = max_with_index(&lengths);
        if routes[longest].len() < 2 {
            break;
        }

        let centroids: Vec<Option<Point>> = routes
            .iter()
            .map(|r| {
                (!r.is_empty()).then(|| centroid(&r.iter().map(|&i| inst.nodes[i]).collect::<Vec<_>>()))
            })
            .collect();
        let mut near: Vec<(f64, usize, usize)> = routes[longest]
            .iter()
            .enumerate()
            .map(|(pos, &x)| {
                let d = (0..k)
                    .filter(|&t| t != longest)
                    .filter_map(|t| centroids[t].map(|c| c.dist(inst.nodes[x])))
                    .fold(f64::INFINITY, f64::min);
                (d, x, pos)
            })
            .collect();
        near.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        near.truncate(RELOCATE_CANDIDATES);
        near.sort_by_key(|t| t.1);

        let others_max = |skip: usize| {
            (0..k)
                .filter(|&r| r != longest && r != skip)
                .map(|r| lengths[r])
                .fold(0.0, f64::max)
        };
        // (estimated new max, node position in longest, target, insert position)
        let mut best: Option<(f64, usize, usize, usize)> = None;
        for &(_, _, pos) in &near {
            let x = routes[longest][pos];
            let shrunk = lengths[longest] - removal_gain(&routes[longest], pos, &dm);
            for t in (0..k).filter(|&t| t != longest) {
                let (ins, added) = cheapest_insertion(&routes[t], x, &dm);
                let grown = if routes[t].is_empty() {
                    2.0 * dm.get(dm.depot(), x)
                } else {
                    lengths[t] + added
                };
                let new_max = shrunk.max(grown).max(others_max(t));
                if new_max < cur_max - IMPROVEMENT && best.is_none_or(|b| new_max < b.0) {
                    best = Some((new_max, pos, t, ins));
                }
            }
        }
        let Some((_, pos, target, ins)) = best else {
            break;
        };

        let x = routes[longest].remove(pos);
        routes[target].insert(ins, x);
        for r in [longest, target] {
            two_opt(&mut routes[r], &dm);
            lengths[r] = dm.tour(&routes[r]);
        }
        trace.push(max_with_index(&lengths).1);
    }

    let routes = routes
        .into_iter()
        .map(|r| Route::new(inst.depot, &inst.nodes, r))
        .collect();
    Ok((
        Solution {
            instance_ref: inst.name.clone(),
            algorithm: ALGORITHM.to_string(),
            k,
            seed,
            routes,
        },
        trace,
    ))
}
