//! Depot-anchored routes and the solution file format shared by all solvers.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::instances::{parse_one, Lines, FORMAT_VERSION};

/// Closed tour length: depot, the nodes in order, back to the depot.
pub fn route_length(depot: Point, nodes: &[Point], order: &[usize]) -> f64 {
    let Some((&first, _)) = order.split_first() else {
        return 0.0;
    };
    let last = *order.last().unwrap();
    let inner: f64 = order
        .windows(2)
        .map(|w| nodes[w[0]].dist(nodes[w[1]]))
        .sum();
    depot.dist(nodes[first]) + inner + nodes[last].dist(depot)
}

/// Open path length through `order`, without depot legs.
pub fn path_length(nodes: &[Point], order: &[usize]) -> f64 {
    order.windows(2).map(|w| nodes[w[0]].dist(nodes[w[1]])).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    /// Instance node indices in visiting order.
    pub nodes: Vec<usize>,
    /// Includes both depot legs.
    pub length: f64,
}

impl Route {
    pub fn new(depot: Point, coords: &[Point], nodes: Vec<usize>) -> Self {
        let length = route_length(depot, coords, &nodes);
        Route { nodes, length }
    }

    pub fn start_anchor(&self) -> Option<usize> {
        self.nodes.first().copied()
    }

    pub fn end_anchor(&self) -> Option<usize> {
        self.nodes.last().copied()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub instance_ref: String,
    pub algorithm: String,
    pub k: usize,
    pub seed: u64,
    pub routes: Vec<Route>,
}

impl Solution {
    pub fn total_length(&self) -> f64 {
        self.routes.iter().map(|r| r.length).sum()
    }

    pub fn max_length(&self) -> f64 {
        self.routes.iter().map(|r| r.length).fold(0.0, f64::max)
    }

    /// Checks that the routes partition `0..n` into exactly `k` routes.
    pub fn check_partition(&self, n: usize) -> Result<()> {
        if self.routes.len() != self.k {
            return Err(Error::InvalidSolution(format!(
                "expected {} routes, found {}",
                self.k,
                self.routes.len()
            )));
        }
        let mut owner = vec![None; n];
        for (r, route) in self.routes.iter().enumerate() {
            for &i in &route.nodes {
                if i >= n {
                    return Err(Error::InvalidSolution(format!(
                        "route {r} references node {i} but the instance has {n} nodes"
                    )));
                }
                if let Some(prev) = owner[i] {
                    return Err(Error::InvalidSolution(format!(
                        "node {i} appears in route {prev} and route {r}"
                    )));
                }
                owner[i] = Some(r);
            }
        }
        if let Some(i) = owner.iter().position(Option::is_none) {
            return Err(Error::InvalidSolution(format!("node {i} is not visited")));
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("# farmroute solution\n");
        writeln!(s, "version {FORMAT_VERSION}").unwrap();
        writeln!(s, "instance {}", self.instance_ref).unwrap();
        writeln!(s, "algorithm {}", self.algorithm).unwrap();
        writeln!(s, "k {}", self.k).unwrap();
        writeln!(s, "seed {}", self.seed).unwrap();
        writeln!(s, "total {:.16e}", self.total_length()).unwrap();
        writeln!(s, "max {:.16e}", self.max_length()).unwrap();
        for r in &self.routes {
            write!(s, "route {:.16e}", r.length).unwrap();
            for i in &r.nodes {
                write!(s, " {i}").unwrap();
            }
            s.push('\n');
        }
        s
    }

    /// Parses a solution document. Stored lengths are read as given; callers
    /// that need trustworthy metrics recompute them (see `evaluation::score`).
    pub fn parse(text: &str) -> Result<Solution> {
        let mut lines = Lines::new(text);
        let (ln, key, rest) = lines
            .next_record()
            .ok_or_else(|| Error::format(1, "version", "empty document"))?;
        if key != "version" {
            return Err(Error::format(ln, "version", "first record must be `version`"));
        }
        let version: u32 = parse_one(ln, "version", rest)?;
        if version != FORMAT_VERSION {
            return Err(Error::Version {
                found: version,
                expected: FORMAT_VERSION,
            });
        }

        let mut instance_ref = None;
        let mut algorithm = None;
        let mut k = None;
        let mut seed = 0;
        let mut routes = Vec::new();
        while let Some((ln, key, rest)) = lines.next_record() {
            match key {
                "instance" => instance_ref = Some(rest.trim().to_string()),
                "algorithm" => algorithm = Some(rest.trim().to_string()),
                "k" => k = Some(parse_one::<usize>(ln, "k", rest)?),
                "seed" => seed = parse_one(ln, "seed", rest)?,
                "total" | "max" => {
                    parse_one::<f64>(ln, key, rest)?;
                }
                "route" => {
                    let mut toks = rest.split_whitespace();
                    let length = toks
                        .next()
                        .ok_or_else(|| Error::format(ln, "route", "missing length"))?;
                    let length: f64 = parse_one(ln, "route", length)?;
                    let nodes = toks
                        .map(|t| parse_one::<usize>(ln, "route", t))
                        .collect::<Result<Vec<_>>>()?;
                    routes.push(Route { nodes, length });
                }
                other => return Err(Error::format(ln, other, "unknown field")),
            }
        }
        let eof = lines.line;
        let missing = |f: &str| Error::format(eof, f, "missing required field");
        Ok(Solution {
            instance_ref: instance_ref.ok_or_else(|| missing("instance"))?,
            algorithm: algorithm.ok_or_else(|| missing("algorithm"))?,
            k: k.ok_or_else(|| missing("k"))?,
            seed,
            routes,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Solution> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Solution::parse(&text)
    }
}
