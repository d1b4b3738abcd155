//! Reference solvers: a min-max local search and an exhaustive oracle for
//! instances small enough to enumerate.

pub mod exact;
pub mod local_search;

pub use exact::{exact_minmax, EXACT_MAX_NODES, EXACT_MAX_ROUTES};
pub use local_search::{minmax_local_search, minmax_local_search_traced, two_opt, SolverBudget};

use crate::geometry::Point;

/// Euclidean distances among the nodes, with the depot at index `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(nodes: &[Point], depot: Point) -> Self {
        let n = nodes.len();
        let pts: Vec<Point> = nodes.iter().copied().chain(std::iter::once(depot)).collect();
        let m = n + 1;
        let mut data = vec![0.0; m * m];
        for i in 0..m {
            for j in i + 1..m {
                let d = pts[i].dist(pts[j]);
                data[i * m + j] = d;
                data[j * m + i] = d;
            }
        }
        DistanceMatrix { n, data }
    }

    /// Number of nodes, excluding the depot.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn depot(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * (self.n + 1) + j]
    }

    /// Closed tour length from the depot through `route` and back.
    pub fn tour(&self, route: &[usize]) -> f64 {
        let Some((&first, _)) = route.split_first() else {
            return 0.0;
        };
        let d = self.depot();
        let inner: f64 = route.windows(2).map(|w| self.get(w[0], w[1])).sum();
        self.get(d, first) + inner + self.get(*route.last().unwrap(), d)
    }
}
