//! Synthetic farm instances: a lattice of ponds clipped to a random convex
//! outline, thinned by random deletion, plus a depot on the boundary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{contains, convex_hull, ConvexPolygon, Point, EPS};
use crate::rng::Stream;

pub const FORMAT_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.txt";

const BISECTION_STEPS: usize = 64;
const POLYGON_ATTEMPTS: usize = 16;
/// Slack on the pre-deletion lattice count; counts are integer step functions
/// of the spacing and cannot always hit the target exactly.
const LATTICE_SLACK: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct FarmInstance {
    pub name: String,
    pub seed: u64,
    pub polygon: ConvexPolygon,
    pub spacing: f64,
    pub lattice_origin: Point,
    pub depot: Point,
    pub nodes: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub node_count: usize,
    pub seed: u64,
    pub polygon_sample_count: usize,
    pub deletion_fraction: f64,
}

impl GeneratorConfig {
    pub fn new(node_count: usize, seed: u64) -> Self {
        GeneratorConfig {
            node_count,
            seed,
            polygon_sample_count: 12,
            deletion_fraction: 0.20,
        }
    }

    /// Lattice size aimed for before deletion.
    pub fn lattice_target(&self) -> usize {
        (self.node_count as f64 / (1.0 - self.deletion_fraction)).ceil() as usize
    }
}

/// Every lattice point `origin + (a, b) * spacing` inside or on `polygon`,
/// in row-major (y, then x) order.
pub fn lattice_points(polygon: &ConvexPolygon, origin: Point, spacing: f64) -> Vec<Point> {
    let (lo, hi) = polygon.bounding_box();
    let mut out = Vec::new();
    let rows = ((hi.y - origin.y) / spacing).floor() as i64 + 1;
    let first_row = ((lo.y - origin.y) / spacing).ceil() as i64 - 1;
    for b in first_row..=rows {
        let y = origin.y + b as f64 * spacing;
        let Some((xl, xr)) = row_extent(polygon, y) else {
            continue;
        };
        let a0 = ((xl - origin.x) / spacing).floor() as i64 - 1;
        let a1 = ((xr - origin.x) / spacing).ceil() as i64 + 1;
        for a in a0..=a1 {
            let p = Point::new(origin.x + a as f64 * spacing, y);
            if contains(polygon, p) {
                out.push(p);
            }
        }
    }
    out
}

/// Horizontal extent of the polygon at height `y`, if the line meets it.
fn row_extent(polygon: &ConvexPolygon, y: f64) -> Option<(f64, f64)> {
    let mut xl = f64::INFINITY;
    let mut xr = f64::NEG_INFINITY;
    for (a, b) in polygon.edges() {
        let (ylo, yhi) = (a.y.min(b.y), a.y.max(b.y));
        if y < ylo - EPS || y > yhi + EPS {
            continue;
        }
        if (b.y - a.y).abs() <= EPS {
            xl = xl.min(a.x.min(b.x));
            xr = xr.max(a.x.max(b.x));
        } else {
            let t = ((y - a.y) / (b.y - a.y)).clamp(0.0, 1.0);
            let x = a.x + t * (b.x - a.x);
            xl = xl.min(x);
            xr = xr.max(x);
        }
    }
    (xl <= xr).then_some((xl, xr))
}

fn random_polygon(rng: &mut Stream, cfg: &GeneratorConfig) -> Result<ConvexPolygon> {
    for _ in 0..POLYGON_ATTEMPTS {
        let samples: Vec<Point> = (0..cfg.polygon_sample_count)
            .map(|_| {
                let x = rng.unit();
                let y = rng.unit();
                Point::new(x, y)
            })
            .collect();
        if let Ok(hull) = convex_hull(&samples) {
            return Ok(hull);
        }
    }
    Err(Error::GenerationFailure {
        size: cfg.node_count,
        seed: cfg.seed,
        reason: format!(
            "{} polygon samples stayed degenerate after {POLYGON_ATTEMPTS} attempts",
            cfg.polygon_sample_count
        ),
    })
}

/// Lattice spacing whose in-polygon count lands within the accepted band,
/// together with that lattice.
fn fit_spacing(
    polygon: &ConvexPolygon,
    origin: Point,
    cfg: &GeneratorConfig,
) -> Result<(f64, Vec<Point>)> {
    let target = cfg.lattice_target();
    let lo_ok = target.saturating_sub(LATTICE_SLACK).max(cfg.node_count);
    let hi_ok = target + LATTICE_SLACK;

    let guess = (polygon.area() / target as f64).sqrt();
    let (mut lo, mut hi) = (guess / 8.0, guess * 8.0);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        let lattice = lattice_points(polygon, origin, mid);
        let count = lattice.len();
        if (lo_ok..=hi_ok).contains(&count) {
            return Ok((mid, lattice));
        }
        if count > hi_ok {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::GenerationFailure {
        size: cfg.node_count,
        seed: cfg.seed,
        reason: format!(
            "spacing bisection did not bracket {lo_ok}..={hi_ok} lattice points in {BISECTION_STEPS} steps"
        ),
    })
}

/// Generates one instance. A pure function of `cfg`.
pub fn generate(cfg: &GeneratorConfig) -> Result<FarmInstance> {
    let fail = |reason: &str| Error::GenerationFailure {
        size: cfg.node_count,
        seed: cfg.seed,
        reason: reason.to_string(),
    };
    if cfg.node_count < 3 {
        return Err(fail("node_count must be at least 3"));
    }
    if !(0.0..1.0).contains(&cfg.deletion_fraction) {
        return Err(fail("deletion_fraction must lie in [0, 1)"));
    }
    if cfg.polygon_sample_count < 3 {
        return Err(fail("polygon_sample_count must be at least 3"));
    }

    let mut rng = Stream::new(cfg.seed);
    let polygon = random_polygon(&mut rng, cfg)?;
    let (origin, _) = polygon.bounding_box();
    let (spacing, mut nodes) = fit_spacing(&polygon, origin, cfg)?;

    while nodes.len() > cfg.node_count {
        let victim = rng.below(nodes.len());
        nodes.remove(victim);
    }
    nodes.sort_by(Point::cmp_yx);

    let inst = FarmInstance {
        name: format!("farm-n{}-s{}", cfg.node_count, cfg.seed),
        seed: cfg.seed,
        polygon,
        spacing,
        lattice_origin: origin,
        depot: Point::default(),
        nodes,
    };
    Ok(place_depot(inst))
}

/// Midpoint of the polygon edge whose midpoint is lowest (ties: leftmost).
pub fn depot_for(polygon: &ConvexPolygon) -> Point {
    let mut best: Option<Point> = None;
    for (a, b) in polygon.edges() {
        let m = a.midpoint(b);
        best = match best {
            None => Some(m),
            Some(cur) if m.y < cur.y - EPS => Some(m),
            Some(cur) if (m.y - cur.y).abs() <= EPS && m.x < cur.x => Some(m),
            keep => keep,
        };
    }
    best.expect("polygon has edges")
}

pub fn place_depot(mut inst: FarmInstance) -> FarmInstance {
    inst.depot = depot_for(&inst.polygon);
    inst
}

fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

impl FarmInstance {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Checks the invariants a loaded instance must satisfy.
    pub fn validate(&self) -> Result<()> {
        if !(self.spacing.is_finite() && self.spacing > 0.0) {
            return Err(Error::format(0, "spacing", "must be a positive finite real"));
        }
        if !self.depot.is_finite() || !self.lattice_origin.is_finite() {
            return Err(Error::format(0, "depot", "non-finite coordinate"));
        }
        if self.nodes.is_empty() {
            return Err(Error::format(0, "nodes", "instance has no nodes"));
        }
        for (i, p) in self.nodes.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::format(0, "nodes", format!("node {i} is not finite")));
            }
            if !contains(&self.polygon, *p) {
                return Err(Error::format(
                    0,
                    "nodes",
                    format!("node {i} at {p} lies outside the polygon"),
                ));
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let p = |pt: Point| format!("{} {}", fmt_real(pt.x), fmt_real(pt.y));
        writeln!(s, "# farmroute instance").unwrap();
        writeln!(s, "version {FORMAT_VERSION}").unwrap();
        writeln!(s, "name {}", self.name).unwrap();
        writeln!(s, "seed {}", self.seed).unwrap();
        writeln!(s, "spacing {}", fmt_real(self.spacing)).unwrap();
        writeln!(s, "lattice_origin {}", p(self.lattice_origin)).unwrap();
        writeln!(s, "depot {}", p(self.depot)).unwrap();
        writeln!(s, "polygon {}", self.polygon.len()).unwrap();
        for &v in self.polygon.vertices() {
            writeln!(s, "{}", p(v)).unwrap();
        }
        writeln!(s, "nodes {}", self.nodes.len()).unwrap();
        for &v in &self.nodes {
            writeln!(s, "{}", p(v)).unwrap();
        }
        s
    }

    /// Parses the instance text format. A missing `depot` line places the
    /// depot by the lowest-edge rule; a missing `lattice_origin` defaults to
    /// the polygon's lower-left bounding-box corner.
    pub fn parse(text: &str) -> Result<FarmInstance> {
        let mut lines = Lines::new(text);

        let (ln, key, rest) = lines
            .next_record()
            .ok_or_else(|| Error::format(lines.line, "version", "empty document"))?;
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

        let mut name = None;
        let mut seed = None;
        let mut spacing = None;
        let mut origin = None;
        let mut depot = None;
        let mut polygon = None;
        let mut nodes = None;

        while let Some((ln, key, rest)) = lines.next_record() {
            match key {
                "name" => name = Some(rest.trim().to_string()),
                "seed" => seed = Some(parse_one::<u64>(ln, "seed", rest)?),
                "spacing" => spacing = Some(parse_one::<f64>(ln, "spacing", rest)?),
                "lattice_origin" => origin = Some(parse_point(ln, "lattice_origin", rest)?),
                "depot" => depot = Some(parse_point(ln, "depot", rest)?),
                "polygon" => {
                    let n: usize = parse_one(ln, "polygon", rest)?;
                    let verts = lines.points(n, "polygon")?;
                    polygon = Some(
                        ConvexPolygon::new(verts)
                            .map_err(|e| Error::format(ln, "polygon", e.to_string()))?,
                    );
                }
                "nodes" => {
                    let n: usize = parse_one(ln, "nodes", rest)?;
                    nodes = Some((ln, lines.points(n, "nodes")?));
                }
                other => return Err(Error::format(ln, other, "unknown field")),
            }
        }

        let eof = lines.line;
        let missing = |f: &str| Error::format(eof, f, "missing required field");
        let polygon = polygon.ok_or_else(|| missing("polygon"))?;
        let (nodes_line, nodes) = nodes.ok_or_else(|| missing("nodes"))?;
        let lattice_origin = origin.unwrap_or_else(|| polygon.bounding_box().0);
        let depot = depot.unwrap_or_else(|| crate::instances::depot_for(&polygon));
        let inst = FarmInstance {
            name: name.ok_or_else(|| missing("name"))?,
            seed: seed.unwrap_or(0),
            polygon,
            spacing: spacing.ok_or_else(|| missing("spacing"))?,
            lattice_origin,
            depot,
            nodes,
        };
        inst.validate().map_err(|e| match e {
            Error::Format { field, message, .. } if field == "nodes" => Error::Format {
                line: nodes_line,
                field,
                message,
            },
            other => other,
        })?;
        Ok(inst)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<FarmInstance> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        FarmInstance::parse(&text)
    }
}

/// Line cursor over a `key value...` document that skips blanks and `#` comments.
pub(crate) struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
    pub line: usize,
}

impl<'a> Lines<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Lines {
            iter: text.lines().enumerate(),
            line: 0,
        }
    }

    pub(crate) fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.iter.by_ref() {
            self.line = i + 1;
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            return Some((i + 1, t));
        }
        None
    }

    pub(crate) fn next_record(&mut self) -> Option<(usize, &'a str, &'a str)> {
        let (ln, t) = self.next_content()?;
        let (key, rest) = t.split_once(char::is_whitespace).unwrap_or((t, ""));
        Some((ln, key, rest))
    }

    fn points(&mut self, n: usize, field: &str) -> Result<Vec<Point>> {
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let (ln, t) = self.next_content().ok_or_else(|| {
                Error::format(self.line, field, format!("expected {n} points, found {k}"))
            })?;
            out.push(parse_point(ln, field, t)?);
        }
        Ok(out)
    }
}

pub(crate) fn parse_one<T: std::str::FromStr>(line: usize, field: &str, s: &str) -> Result<T> {
    let mut toks = s.split_whitespace();
    let tok = toks
        .next()
        .ok_or_else(|| Error::format(line, field, "missing value"))?;
    if toks.next().is_some() {
        return Err(Error::format(line, field, "expected a single value"));
    }
    tok.parse()
        .map_err(|_| Error::format(line, field, format!("cannot parse `{tok}`")))
}

fn parse_point(line: usize, field: &str, s: &str) -> Result<Point> {
    let toks: Vec<&str> = s.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(Error::format(
            line,
            field,
            format!("expected `x y`, found {} tokens", toks.len()),
        ));
    }
    let num = |t: &str| -> Result<f64> {
        let v: f64 = t
            .parse()
            .map_err(|_| Error::format(line, field, format!("cannot parse `{t}`")))?;
        if !v.is_finite() {
            return Err(Error::format(line, field, format!("non-finite value `{t}`")));
        }
        Ok(v)
    };
    Ok(Point::new(num(toks[0])?, num(toks[1])?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub size: usize,
    pub seed: u64,
}

/// Listing of a generated dataset. Entry paths are relative to the manifest's
/// directory on disk and resolved against `root` after loading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub root: PathBuf,
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn resolve(&self, entry: &ManifestEntry) -> PathBuf {
        self.root.join(&entry.path)
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.entries.iter().map(|e| e.size).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("# path size seed\n");
        for e in &self.entries {
            writeln!(s, "{} {} {}", e.path.display(), e.size, e.seed).unwrap();
        }
        s
    }

    pub fn parse(text: &str, root: impl Into<PathBuf>) -> Result<Manifest> {
        let mut lines = Lines::new(text);
        let mut entries = Vec::new();
        while let Some((ln, t)) = lines.next_content() {
            let toks: Vec<&str> = t.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(Error::format(ln, "manifest", "expected `path size seed`"));
            }
            entries.push(ManifestEntry {
                path: PathBuf::from(toks[0]),
                size: parse_one(ln, "size", toks[1])?,
                seed: parse_one(ln, "seed", toks[2])?,
            });
        }
        Ok(Manifest {
            root: root.into(),
            entries,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Manifest> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let root = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Manifest::parse(&text, root)
    }
}

/// Writes `count_per_size` instances per size (seeds `base_seed + index`) and
/// a manifest into `out_dir`, returning the manifest's path.
pub fn generate_dataset(
    sizes: &[usize],
    count_per_size: usize,
    base_seed: u64,
    out_dir: impl AsRef<Path>,
) -> Result<PathBuf> {
    let out_dir = out_dir.as_ref();
    if sizes.is_empty() || count_per_size == 0 {
        return Err(Error::GenerationFailure {
            size: 0,
            seed: base_seed,
            reason: "need at least one size and one instance per size".into(),
        });
    }
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    let jobs: Vec<(usize, u64)> = sizes
        .iter()
        .flat_map(|&size| (0..count_per_size as u64).map(move |i| (size, base_seed + i)))
        .collect();
    let entries = jobs
        .par_iter()
        .map(|&(size, seed)| {
            let inst = generate(&GeneratorConfig::new(size, seed))?;
            let file = PathBuf::from(format!("n{size}_s{seed}.txt"));
            inst.save(out_dir.join(&file))?;
            Ok(ManifestEntry {
                path: file,
                size,
                seed,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let manifest = Manifest {
        root: out_dir.to_path_buf(),
        entries,
    };
    let path = out_dir.join(MANIFEST_FILE);
    fs::write(&path, manifest.to_text()).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}
