use crate::error::{Error, Result};
use crate::instances::FarmInstance;
use crate::solution::{Route, Solution};

use super::DistanceMatrix;

pub const ALGORITHM: &str = "exact";
pub const EXACT_MAX_NODES: usize = 10;
pub const EXACT_MAX_ROUTES: usize = 3;

const TIE: f64 = 1e-12;

/// Shortest closed tour over the nodes in `mask`, by depth-first enumeration
/// of visit orders in lexicographic order. Partial tours already no shorter
/// than the best complete one are cut, which never discards a strictly better
/// order; among equal tours the lexicographically first is kept.
fn best_tour(mask: u32, n: usize, dm: &DistanceMatrix) -> (f64, Vec<usize>) {
    let items: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
    let mut best = (f64::INFINITY, Vec::new());
    let mut path = Vec::with_capacity(items.len());
    let mut used = vec![false; items.len()];

    fn dfs(
        items: &[usize],
        used: &mut [bool],
        path: &mut Vec<usize>,
        partial: f64,
        dm: &DistanceMatrix,
        best: &mut (f64, Vec<usize>),
    ) {
        if partial >= best.0 - TIE {
            return;
        }
        let last = path.last().copied().unwrap_or(dm.depot());
        if path.len() == items.len() {
            let total = partial + dm.get(last, dm.depot());
            if total < best.0 - TIE {
                *best = (total, path.clone());
            }
            return;
        }
        for k in 0..items.len() {
            if used[k] {
                continue;
            }
            used[k] = true;
            path.push(items[k]);
            dfs(items, used, path, partial + dm.get(last, items[k]), dm, best);
            path.pop();
            used[k] = false;
        }
    }

    dfs(&items, &mut used, &mut path, 0.0, dm, &mut best);
    best
}

/// Exhaustive min-max solver for tiny instances.
///
/// Every split of the nodes into `k` non-empty routes is enumerated (as
/// restricted growth strings, so each split appears once) together with the
/// optimal visiting order of each route. The result minimises the longest
/// route, then the total length, then the route contents lexicographically.
/// Empty routes are never needed: splitting a node off into its own route
/// costs at most the route it left.
pub fn exact_minmax(inst: &FarmInstance, k: usize) -> Result<Solution> {
    let n = inst.nodes.len();
    if n > EXACT_MAX_NODES || k > EXACT_MAX_ROUTES {
        return Err(Error::TooLarge(format!(
            "{n} nodes and {k} routes; the limits are {EXACT_MAX_NODES} nodes and {EXACT_MAX_ROUTES} routes"
        )));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidK {
            k,
            reason: format!("need 1 <= k <= {n} nodes"),
        });
    }
    let dm = DistanceMatrix::new(&inst.nodes, inst.depot);
    let tours: Vec<(f64, Vec<usize>)> = (0..1u32 << n).map(|m| best_tour(m, n, &dm)).collect();

    let mut labels = vec![0usize; n];
    let mut best: Option<(f64, f64, Vec<Vec<usize>>)> = None;
    enumerate_splits(&mut labels, 1, 1, k, &mut |labels| {
        let mut masks = vec![0u32; k];
        for (i, &l) in labels.iter().enumerate() {
            masks[l] |= 1 << i;
        }
        let max = masks.iter().map(|&m| tours[m as usize].0).fold(0.0, f64::max);
        let total: f64 = masks.iter().map(|&m| tours[m as usize].0).sum();
        let better = match &best {
            None => true,
            Some((bm, bt, content)) => {
                if max < bm - TIE {
                    true
                } else if max > bm + TIE {
                    false
                } else if total < bt - TIE {
                    true
                } else if total > bt + TIE {
                    false
                } else {
                    let routes: Vec<Vec<usize>> = masks.iter().map(|&m| tours[m as usize].1.clone()).collect();
                    routes < *content
                }
            }
        };
        if better {
            let routes = masks.iter().map(|&m| tours[m as usize].1.clone()).collect();
            best = Some((max, total, routes));
        }
    });

    let (_, _, routes) = best.expect("k <= n admits at least one split");
    Ok(Solution {
        instance_ref: inst.name.clone(),
        algorithm: ALGORITHM.to_string(),
        k,
        seed: 0,
        routes: routes
            .into_iter()
            .map(|r| Route::new(inst.depot, &inst.nodes, r))
            .collect(),
    })
}

/// Calls `visit` for every labelling of `labels` into exactly `k` blocks in
/// restricted growth form (`labels[0] = 0`, each label at most one above the
/// running maximum).
fn enumerate_splits(labels: &mut [usize], pos: usize, used: usize, k: usize, visit: &mut dyn FnMut(&[usize])) {
    let n = labels.len();
    if pos == n {
        if used == k {
            visit(labels);
        }
        return;
    }
    // Not enough positions left to open the missing blocks.
    if k - used > n - pos {
        return;
    }
    for l in 0..used.min(k) {
        labels[pos] = l;
        enumerate_splits(labels, pos + 1, used, k, visit);
    }
    if used < k {
        labels[pos] = used;
        enumerate_splits(labels, pos + 1, used + 1, k, visit);
    }
}
