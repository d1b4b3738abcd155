use crate::error::{Error, Result};
use crate::geometry::{centroid, spans_area, Point};

use super::kmeans::ClusterAssignment;

/// Minimum donor size for a donation that keeps the donor at 4 or more.
const COMFORTABLE_DONOR: usize = 5;

/// One node moved into an invalid cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transfer {
    pub node: usize,
    pub from: usize,
    pub to: usize,
}

/// A cluster can be routed once it holds 3 or more non-collinear nodes.
pub fn is_valid_cluster(nodes: &[Point], members: &[usize]) -> bool {
    if members.len() < 3 {
        return false;
    }
    let pts: Vec<Point> = members.iter().map(|&i| nodes[i]).collect();
    spans_area(&pts)
}

/// Grows undersized or collinear clusters by absorbing nodes from neighbours.
///
/// See [`repair_clusters_traced`] for the rule.
pub fn repair_clusters(assign: &ClusterAssignment, nodes: &[Point]) -> Result<ClusterAssignment> {
    repair_clusters_traced(assign, nodes).map(|(a, _)| a)
}

/// Repair loop, returning the transfers in the order they were made.
///
/// While some cluster is invalid (lowest index first), it absorbs the node
/// nearest to its current centroid. Eligible donors are clusters holding 5 or
/// more nodes; if none exists, the largest other cluster donates. Either way a
/// node is only taken if its cluster stays valid without it, unless the
/// largest cluster has no such node. Centroids of both clusters are
/// recomputed after every move.
pub fn repair_clusters_traced(
    assign: &ClusterAssignment,
    nodes: &[Point],
) -> Result<(ClusterAssignment, Vec<Transfer>)> {
    let k = assign.k;
    let n = nodes.len();
    if n < 3 * k {
        return Err(Error::RepairImpossible(format!(
            "{n} nodes cannot give each of {k} clusters 3 nodes"
        )));
    }

    let mut out = assign.clone();
    let mut members = out.clusters();
    let mut trace = Vec::new();
    let budget = 4 * n + 16;

    for _ in 0..budget {
        let Some(c) = (0..k).find(|&c| !is_valid_cluster(nodes, &members[c])) else {
            return Ok((out, trace));
        };

        let keeps_donor_valid = |d: usize, i: usize| {
            let rest: Vec<usize> = members[d].iter().copied().filter(|&m| m != i).collect();
            is_valid_cluster(nodes, &rest)
        };
        let largest = (0..k)
            .filter(|&d| d != c)
            .max_by(|&a, &b| members[a].len().cmp(&members[b].len()).then(b.cmp(&a)))
            .expect("k >= 2 when some cluster is invalid");

        let comfortable: Vec<(usize, usize)> = (0..k)
            .filter(|&d| d != c && members[d].len() >= COMFORTABLE_DONOR)
            .flat_map(|d| members[d].iter().map(move |&i| (d, i)))
            .filter(|&(d, i)| keeps_donor_valid(d, i))
            .collect();
        let candidates = if !comfortable.is_empty() {
            comfortable
        } else {
            let from_largest: Vec<(usize, usize)> =
                members[largest].iter().map(|&i| (largest, i)).collect();
            let safe: Vec<(usize, usize)> = from_largest
                .iter()
                .copied()
                .filter(|&(d, i)| keeps_donor_valid(d, i))
                .collect();
            if safe.is_empty() {
                from_largest
            } else {
                safe
            }
        };

        let target = out.centroids[c];
        let mut best: Option<(usize, usize, f64)> = None;
        for (d, i) in candidates {
            let dist = nodes[i].dist_sq(target);
            let better = match best {
                None => true,
                Some((bi, _, bd)) => dist < bd || (dist == bd && i < bi),
            };
            if better {
                best = Some((i, d, dist));
            }
        }
        let Some((node, from, _)) = best else {
            break;
        };

        members[from].retain(|&i| i != node);
        members[c].push(node);
        members[c].sort_unstable();
        out.labels[node] = c;
        for cl in [c, from] {
            if !members[cl].is_empty() {
                let pts: Vec<Point> = members[cl].iter().map(|&i| nodes[i]).collect();
                out.centroids[cl] = centroid(&pts);
            }
        }
        trace.push(Transfer { node, from, to: c });
    }

    Err(Error::RepairImpossible(format!(
        "no valid clustering reached after {budget} transfers; nodes may be collinear"
    )))
}
