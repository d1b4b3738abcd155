//! The `farmroute` command line: `generate`, `solve`, `bench` and `plot`.
//!
//! Exit codes are 0 on success, 1 on runtime failure and 2 on usage errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};

use crate::baseline::SolverBudget;
use crate::error::{Error, Result};
use crate::evaluation::{run_benchmark, score, BenchConfig};
use crate::geometry::{convex_hull, Point};
use crate::instances::{generate_dataset, FarmInstance, Manifest};
use crate::solution::Solution;
use crate::solver::{solve, Algorithm};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Route colours, assigned by route index.
pub const PALETTE: [&str; 10] = [
    "#e6194b", "#3cb44b", "#f58231", "#911eb4", "#42d4f4", "#f032e6", "#9a6324", "#808000", "#000075", "#469990",
];

#[derive(Debug, Parser)]
#[command(name = "farmroute", version, about = "Multi-route coverage planning on farm grids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn seconds(s: &str) -> std::result::Result<Duration, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    Duration::try_from_secs_f64(v).map_err(|e| e.to_string())
}

#[derive(Debug, clap::Args)]
struct BudgetArgs {
    /// Relocation iterations for minmax-ls.
    #[arg(long, default_value_t = 1000)]
    max_iterations: usize,
    /// Wall-clock limit for minmax-ls, in seconds.
    #[arg(long, value_parser = seconds)]
    time_limit: Option<Duration>,
}

impl BudgetArgs {
    fn budget(&self) -> SolverBudget {
        SolverBudget {
            max_iterations: self.max_iterations,
            time_limit: self.time_limit,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a dataset of random instances plus a manifest.
    Generate {
        /// Comma-separated node counts.
        #[arg(long, value_delimiter = ',', required = true, value_parser = positive)]
        sizes: Vec<usize>,
        /// Instances per size.
        #[arg(long, default_value_t = 100, value_parser = positive)]
        count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve one instance and write the solution file.
    Solve {
        #[arg(long, default_value = "hpp")]
        algorithm: Algorithm,
        #[arg(long, default_value_t = 5, value_parser = positive)]
        routes: usize,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Solve every instance of a manifest and report aggregate metrics.
    Bench {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "hpp")]
        algorithms: Vec<Algorithm>,
        #[arg(long, default_value_t = 5, value_parser = positive)]
        routes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV output path.
        #[arg(long)]
        report: PathBuf,
        /// Text table output path; printed to stdout when absent.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Threads for an additional parallel pass.
        #[arg(long, default_value_t = 1, value_parser = positive)]
        jobs: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Draw an instance, and optionally a solution, as SVG.
    Plot {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: Option<PathBuf>,
        /// Outline the hull of each route's nodes.
        #[arg(long)]
        clusters: bool,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 900, value_parser = positive)]
        width: usize,
        #[arg(long, default_value_t = 900, value_parser = positive)]
        height: usize,
    },
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}

fn execute(cmd: Command) -> Result<()> {
    match cmd {
        Command::Generate {
            sizes,
            count,
            seed,
            out,
        } => {
            let manifest = generate_dataset(&sizes, count, seed, &out)?;
            println!("{}", manifest.display());
        }
        Command::Solve {
            algorithm,
            routes,
            instance,
            out,
            seed,
            budget,
        } => {
            let inst = FarmInstance::load(&instance)?;
            let started = Instant::now();
            let sol = solve(algorithm, &inst, routes, seed, budget.budget())?;
            let elapsed = started.elapsed().as_secs_f64();
            let m = score(&inst, &sol)?;
            sol.save(&out)?;
            println!(
                "{algorithm} total={} max={} time={elapsed:.6}",
                m.total_distance, m.max_route_length
            );
        }
        Command::Bench {
            manifest,
            algorithms,
            routes,
            seed,
            report,
            table,
            jobs,
            budget,
        } => {
            let manifest = Manifest::load(&manifest)?;
            let cfg = BenchConfig {
                algorithms,
                k: routes,
                seed,
                budget: budget.budget(),
                jobs,
            };
            let result = run_benchmark(&manifest, &cfg)?;
            result.write_csv(&report)?;
            match table {
                Some(p) => fs::write(&p, result.to_table()).map_err(|e| Error::io(&p, e))?,
                None => print!("{}", result.to_table()),
            }
        }
        Command::Plot {
            instance,
            solution,
            clusters,
            out,
            width,
            height,
        } => {
            let inst = FarmInstance::load(&instance)?;
            let sol = solution.as_deref().map(Solution::load).transpose()?;
            let svg = render_svg(&inst, sol.as_ref(), clusters, width, height)?;
            write_file(&out, &svg)?;
        }
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Renders the field outline, nodes, depot and routes as an SVG document.
///
/// The solution is validated against the instance first: it must name the
/// instance and partition its nodes. Coordinates map affinely into the
/// viewport with equal x and y scale and y pointing up.
pub fn render_svg(
    inst: &FarmInstance,
    sol: Option<&Solution>,
    clusters: bool,
    width: usize,
    height: usize,
) -> Result<String> {
    if let Some(sol) = sol {
        if sol.instance_ref != inst.name {
            return Err(Error::InvalidSolution(format!(
                "solution is for instance `{}`, not `{}`",
                sol.instance_ref, inst.name
            )));
        }
        score(inst, sol)?;
    }

    let mut pts: Vec<Point> = inst.polygon.vertices().to_vec();
    pts.extend_from_slice(&inst.nodes);
    pts.push(inst.depot);
    let lo = pts.iter().fold(Point::new(f64::INFINITY, f64::INFINITY), |a, p| {
        Point::new(a.x.min(p.x), a.y.min(p.y))
    });
    let hi = pts.iter().fold(Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY), |a, p| {
        Point::new(a.x.max(p.x), a.y.max(p.y))
    });
    let (w, h) = (width as f64, height as f64);
    let margin = 0.05 * w.min(h);
    let span_x = (hi.x - lo.x).max(1e-12);
    let span_y = (hi.y - lo.y).max(1e-12);
    let scale = ((w - 2.0 * margin) / span_x).min((h - 2.0 * margin) / span_y);
    let off_x = (w - scale * span_x) / 2.0;
    let off_y = (h - scale * span_y) / 2.0;
    let map = |p: Point| (off_x + (p.x - lo.x) * scale, h - off_y - (p.y - lo.y) * scale);
    let path = |ps: &mut dyn Iterator<Item = Point>| {
        ps.map(|p| {
            let (x, y) = map(p);
            format!("{x:.2},{y:.2}")
        })
        .collect::<Vec<_>>()
        .join(" ")
    };

    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{width}" height="{height}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r##"<polygon class="field" points="{}" fill="none" stroke="#1f4e9c" stroke-width="2"/>"##,
        path(&mut inst.polygon.vertices().iter().copied())
    )
    .unwrap();

    if let Some(sol) = sol {
        if clusters {
            for (r, route) in sol.routes.iter().enumerate() {
                let members: Vec<Point> = route.nodes.iter().map(|&i| inst.nodes[i]).collect();
                // Degenerate clusters have no hull to draw.
                if let Ok(hull) = convex_hull(&members) {
                    let c = PALETTE[r % PALETTE.len()];
                    writeln!(
                        s,
                        r#"<polygon class="cluster" points="{}" fill="{c}" fill-opacity="0.12" stroke="{c}" stroke-dasharray="4 3"/>"#,
                        path(&mut hull.vertices().iter().copied())
                    )
                    .unwrap();
                }
            }
        }
        for (r, route) in sol.routes.iter().enumerate() {
            let c = PALETTE[r % PALETTE.len()];
            let mut seq = std::iter::once(inst.depot)
                .chain(route.nodes.iter().map(|&i| inst.nodes[i]))
                .chain(std::iter::once(inst.depot));
            writeln!(
                s,
                r#"<polyline class="route" points="{}" fill="none" stroke="{c}" stroke-width="1.5"/>"#,
                path(&mut seq)
            )
            .unwrap();
        }
    }

    for &p in &inst.nodes {
        let (x, y) = map(p);
        writeln!(s, r##"<circle class="node" cx="{x:.2}" cy="{y:.2}" r="2.5" fill="#333333"/>"##).unwrap();
    }
    let (dx, dy) = map(inst.depot);
    writeln!(
        s,
        r##"<circle class="depot" cx="{dx:.2}" cy="{dy:.2}" r="7" fill="#1f4e9c" stroke="white" stroke-width="2"/>"##
    )
    .unwrap();
    s.push_str("</svg>\n");
    Ok(s)
}
