//! Batch benchmarking: per-instance scoring, per-size aggregation, and CSV
//! and text reports.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::baseline::SolverBudget;
use crate::error::{Error, Result};
use crate::instances::{FarmInstance, Manifest};
use crate::solution::{route_length, Solution};
use crate::solver::{solve, Algorithm};

pub const CSV_HEADER: &str = "size,algorithm,mean_total,mean_max,batch_time_s,instances,mode";

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceMetrics {
    pub instance: String,
    pub algorithm: String,
    pub total_distance: f64,
    pub max_route_length: f64,
    pub route_lengths: Vec<f64>,
    /// Wall time of the solve call alone; zero when produced by [`score`].
    pub solve_time: Duration,
}

/// Recomputes all route lengths from the instance coordinates. Lengths stored
/// in the solution are ignored.
pub fn score(inst: &FarmInstance, sol: &Solution) -> Result<InstanceMetrics> {
    sol.check_partition(inst.len())?;
    if sol.k == 0 {
        return Err(Error::InvalidSolution("solution declares k = 0".into()));
    }
    let route_lengths: Vec<f64> = sol
        .routes
        .iter()
        .map(|r| route_length(inst.depot, &inst.nodes, &r.nodes))
        .collect();
    Ok(InstanceMetrics {
        instance: inst.name.clone(),
        algorithm: sol.algorithm.clone(),
        total_distance: route_lengths.iter().sum(),
        max_route_length: route_lengths.iter().copied().fold(0.0, f64::max),
        route_lengths,
        solve_time: Duration::ZERO,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    Parallel,
    /// The algorithm does not accept instances of this size.
    Skipped,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sequential => "sequential",
            Mode::Parallel => "parallel",
            Mode::Skipped => "skipped",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub size: usize,
    pub algorithm: String,
    /// `None` on skipped rows.
    pub mean_total: Option<f64>,
    pub mean_max: Option<f64>,
    pub batch_time_s: Option<f64>,
    pub instances: usize,
    pub mode: Mode,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub algorithms: Vec<Algorithm>,
    pub k: usize,
    pub seed: u64,
    pub budget: SolverBudget,
    /// Above 1, each batch is also solved on this many threads and reported
    /// as an extra `parallel` row.
    pub jobs: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            algorithms: vec![Algorithm::Hpp],
            k: 5,
            seed: 0,
            budget: SolverBudget::default(),
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchmarkReport {
    pub k: usize,
    pub rows: Vec<ReportRow>,
    /// Sequential-pass metrics of every solved instance.
    pub metrics: Vec<InstanceMetrics>,
}

fn solve_one(alg: Algorithm, inst: &FarmInstance, label: &str, cfg: &BenchConfig) -> Result<InstanceMetrics> {
    let wrap = |e: Error| Error::Instance {
        instance: label.to_string(),
        source: Box::new(e),
    };
    let started = Instant::now();
    let sol = solve(alg, inst, cfg.k, cfg.seed, cfg.budget).map_err(wrap)?;
    let elapsed = started.elapsed();
    let mut m = score(inst, &sol).map_err(wrap)?;
    m.solve_time = elapsed;
    Ok(m)
}

fn mean(v: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = v.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    s / n as f64
}

/// Solves every manifest instance with every algorithm.
///
/// Instances are loaded before any timing starts. The headline batch time is
/// the sum of the per-instance solve-call times in a sequential pass. Sizes
/// an algorithm cannot handle produce a `skipped` row. The first solver error
/// aborts the run, naming the instance file.
pub fn run_benchmark(manifest: &Manifest, cfg: &BenchConfig) -> Result<BenchmarkReport> {
    let mut by_size: BTreeMap<usize, Vec<(String, FarmInstance)>> = BTreeMap::new();
    for e in &manifest.entries {
        let path = manifest.resolve(e);
        let inst = FarmInstance::load(&path)?;
        by_size
            .entry(e.size)
            .or_default()
            .push((e.path.display().to_string(), inst));
    }

    let mut rows = Vec::new();
    let mut metrics = Vec::new();
    for alg in &cfg.algorithms {
        for (&size, batch) in &by_size {
            let row = |mode, m: Option<(f64, f64, f64)>| ReportRow {
                size,
                algorithm: alg.name().to_string(),
                mean_total: m.map(|t| t.0),
                mean_max: m.map(|t| t.1),
                batch_time_s: m.map(|t| t.2),
                instances: batch.len(),
                mode,
            };
            if batch.iter().any(|(_, inst)| !alg.accepts(inst.len(), cfg.k)) {
                rows.push(row(Mode::Skipped, None));
                continue;
            }

            if cfg.jobs > 1 {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(cfg.jobs)
                    .build()
                    .expect("thread pool with a positive thread count");
                let started = Instant::now();
                let par: Vec<InstanceMetrics> = pool.install(|| {
                    batch
                        .par_iter()
                        .map(|(label, inst)| solve_one(*alg, inst, label, cfg))
                        .collect::<Result<_>>()
                })?;
                let wall = started.elapsed().as_secs_f64();
                rows.push(row(
                    Mode::Parallel,
                    Some((
                        mean(par.iter().map(|m| m.total_distance)),
                        mean(par.iter().map(|m| m.max_route_length)),
                        wall,
                    )),
                ));
            }

            let seq: Vec<InstanceMetrics> = batch
                .iter()
                .map(|(label, inst)| solve_one(*alg, inst, label, cfg))
                .collect::<Result<_>>()?;
            rows.push(row(
                Mode::Sequential,
                Some((
                    mean(seq.iter().map(|m| m.total_distance)),
                    mean(seq.iter().map(|m| m.max_route_length)),
                    seq.iter().map(|m| m.solve_time.as_secs_f64()).sum(),
                )),
            ));
            metrics.extend(seq);
        }
    }
    Ok(BenchmarkReport { k: cfg.k, rows, metrics })
}

impl BenchmarkReport {
    /// Rows used for the headline table: sequential and skipped ones.
    pub fn headline(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.mode != Mode::Parallel)
    }

    pub fn row(&self, size: usize, algorithm: &str) -> Option<&ReportRow> {
        self.headline().find(|r| r.size == size && r.algorithm == algorithm)
    }

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut s = format!("{CSV_HEADER}\n");
        for r in &self.rows {
            writeln!(
                s,
                "{},{},{},{},{},{},{}",
                r.size,
                r.algorithm,
                opt(r.mean_total),
                opt(r.mean_max),
                opt(r.batch_time_s),
                r.instances,
                r.mode
            )
            .unwrap();
        }
        s
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }

    /// Aligned text table with blocks for total distance, maximum route
    /// length and batch run time; one column per size.
    pub fn to_table(&self) -> String {
        let mut sizes: Vec<usize> = self.rows.iter().map(|r| r.size).collect();
        sizes.sort_unstable();
        sizes.dedup();
        let mut algs: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !algs.contains(&r.algorithm.as_str()) {
                algs.push(&r.algorithm);
            }
        }
        let count = self.headline().map(|r| r.instances).max().unwrap_or(0);
        let width = algs.iter().map(|a| a.len()).max().unwrap_or(0).max(9);

        let mut s = String::new();
        writeln!(s, "# k = {}; run times are solve calls only, instance loading excluded", self.k).unwrap();
        let blocks: [(&str, fn(&ReportRow) -> Option<String>); 3] = [
            ("Total distance", |r| r.mean_total.map(|v| format!("{v:.2}"))),
            ("Max route length", |r| r.mean_max.map(|v| format!("{v:.2}"))),
            ("Run time (s)", |r| r.batch_time_s.map(|v| format!("{v:.2e}"))),
        ];
        for (title, cell) in blocks {
            let title = if title.starts_with("Run") {
                format!("Run time for {count} instances (s)")
            } else {
                title.to_string()
            };
            writeln!(s, "\n{title}").unwrap();
            write!(s, "{:<width$}", "algorithm").unwrap();
            for n in &sizes {
                write!(s, " {:>10}", n).unwrap();
            }
            s.push('\n');
            for a in &algs {
                write!(s, "{a:<width$}").unwrap();
                for &n in &sizes {
                    let v = self
                        .row(n, a)
                        .map(|r| cell(r).unwrap_or_else(|| "---".into()))
                        .unwrap_or_default();
                    write!(s, " {v:>10}").unwrap();
                }
                s.push('\n');
            }
        }
        s
    }
}

/// Least-squares exponent `b` of `y = a * x^b` on a log-log scale.
pub fn power_law_exponent(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let mx = mean(logs.iter().map(|p| p.0));
    let my = mean(logs.iter().map(|p| p.1));
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
