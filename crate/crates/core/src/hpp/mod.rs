//! The cluster-then-route solver: k-means over all nodes, repair of clusters
//! too small or too thin to route, then one antipodal-anchored serpentine
//! per cluster, closed through the depot.

mod kmeans;
mod repair;
mod serpentine;

pub use kmeans::{kmeans, nearest, ClusterAssignment};
pub use repair::{is_valid_cluster, repair_clusters, repair_clusters_traced, Transfer};
pub use serpentine::{
    cluster_hull, estimate_spacing, lane_directions, route_cluster, serpentine_route,
    sweep_candidates, Candidate, Orientation,
};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::instances::FarmInstance;
use crate::solution::{Route, Solution};

pub const ALGORITHM: &str = "hpp";

/// Intermediate products of one solve, for plotting and diagnostics.
#[derive(Debug, Clone)]
pub struct HppPlan {
    pub clusters: ClusterAssignment,
    pub repaired: ClusterAssignment,
    pub routes: Vec<Route>,
}

/// Runs the pipeline on bare coordinates. `spacing` falls back to the median
/// nearest-neighbour distance when not given.
pub fn plan(nodes: &[Point], depot: Point, spacing: Option<f64>, k: usize, seed: u64) -> Result<HppPlan> {
    if k == 0 {
        return Err(Error::InvalidK {
            k,
            reason: "at least one route is required".into(),
        });
    }
    if 3 * k > nodes.len() {
        return Err(Error::RepairImpossible(format!(
            "{} nodes cannot give each of {k} clusters 3 nodes",
            nodes.len()
        )));
    }
    let spacing = match spacing {
        Some(s) if s.is_finite() && s > 0.0 => s,
        _ => estimate_spacing(nodes),
    };
    let clusters = kmeans(nodes, k, seed)?;
    let repaired = repair_clusters(&clusters, nodes)?;
    let routes = repaired
        .clusters()
        .iter()
        .map(|members| route_cluster(nodes, members, depot, spacing))
        .collect::<Result<Vec<_>>>()?;
    Ok(HppPlan {
        clusters,
        repaired,
        routes,
    })
}

/// Solves an instance with `k` routes. Deterministic in `(inst, k, seed)`.
pub fn hpp_solve(inst: &FarmInstance, k: usize, seed: u64) -> Result<Solution> {
    let plan = plan(&inst.nodes, inst.depot, Some(inst.spacing), k, seed)?;
    Ok(Solution {
        instance_ref: inst.name.clone(),
        algorithm: ALGORITHM.to_string(),
        k,
        seed,
        routes: plan.routes,
    })
}
