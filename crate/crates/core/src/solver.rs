//! Uniform entry point over the three solvers.

use std::fmt;
use std::str::FromStr;

use crate::baseline::{exact_minmax, minmax_local_search, SolverBudget, EXACT_MAX_NODES, EXACT_MAX_ROUTES};
use crate::error::Result;
use crate::hpp::hpp_solve;
use crate::instances::FarmInstance;
use crate::solution::Solution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Hpp,
    MinmaxLs,
    Exact,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Hpp, Algorithm::MinmaxLs, Algorithm::Exact];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Hpp => crate::hpp::ALGORITHM,
            Algorithm::MinmaxLs => crate::baseline::local_search::ALGORITHM,
            Algorithm::Exact => crate::baseline::exact::ALGORITHM,
        }
    }

    /// False only for the exact solver above its size limits.
    pub fn accepts(self, node_count: usize, k: usize) -> bool {
        self != Algorithm::Exact || (node_count <= EXACT_MAX_NODES && k <= EXACT_MAX_ROUTES)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected hpp, minmax-ls or exact)"))
    }
}

/// Runs `alg` on `inst`. The exact solver is deterministic without a seed;
/// the seed is still recorded in the solution.
pub fn solve(alg: Algorithm, inst: &FarmInstance, k: usize, seed: u64, budget: SolverBudget) -> Result<Solution> {
    match alg {
        Algorithm::Hpp => hpp_solve(inst, k, seed),
        Algorithm::MinmaxLs => minmax_local_search(inst, k, seed, budget),
        Algorithm::Exact => exact_minmax(inst, k).map(|s| Solution { seed, ..s }),
    }
}
