//! Python bindings: instances, solutions, the three solvers, scoring and the
//! geometry primitives. Points cross the boundary as `(x, y)` tuples.

use std::time::Duration;

use farmroute::baseline::{self, SolverBudget};
use farmroute::evaluation;
use farmroute::geometry::{self, ConvexPolygon, Point};
use farmroute::hpp;
use farmroute::instances::{self, GeneratorConfig};
use farmroute::solver::{self, Algorithm};
use farmroute::Error;
use pyo3::create_exception;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(farmroute_py, FarmrouteError, PyValueError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        other => FarmrouteError::new_err(other.to_string()),
    }
}

fn points(v: Vec<(f64, f64)>) -> Vec<Point> {
    v.into_iter().map(|(x, y)| Point::new(x, y)).collect()
}

fn tuples(v: &[Point]) -> Vec<(f64, f64)> {
    v.iter().map(|p| (p.x, p.y)).collect()
}

#[pyclass(name = "Instance", module = "farmroute_py", frozen)]
struct PyInstance(instances::FarmInstance);

#[pymethods]
impl PyInstance {
    #[staticmethod]
    #[pyo3(signature = (node_count, seed=0))]
    fn generate(node_count: usize, seed: u64) -> PyResult<Self> {
        instances::generate(&GeneratorConfig::new(node_count, seed)).map(PyInstance).map_err(to_py)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        instances::FarmInstance::load(path).map(PyInstance).map_err(to_py)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        instances::FarmInstance::parse(text).map(PyInstance).map_err(to_py)
    }

    fn save(&self, path: &str) -> PyResult<()> {
        self.0.save(path).map_err(to_py)
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name.clone()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.0.seed
    }

    #[getter]
    fn spacing(&self) -> f64 {
        self.0.spacing
    }

    #[getter]
    fn depot(&self) -> (f64, f64) {
        (self.0.depot.x, self.0.depot.y)
    }

    #[getter]
    fn nodes(&self) -> Vec<(f64, f64)> {
        tuples(&self.0.nodes)
    }

    #[getter]
    fn polygon(&self) -> Vec<(f64, f64)> {
        tuples(self.0.polygon.vertices())
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Instance(name={:?}, nodes={})", self.0.name, self.0.len())
    }
}

#[pyclass(name = "Solution", module = "farmroute_py", frozen)]
struct PySolution(farmroute::Solution);

#[pymethods]
impl PySolution {
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        farmroute::Solution::load(path).map(PySolution).map_err(to_py)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        farmroute::Solution::parse(text).map(PySolution).map_err(to_py)
    }

    fn save(&self, path: &str) -> PyResult<()> {
        self.0.save(path).map_err(to_py)
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    #[getter]
    fn instance_ref(&self) -> String {
        self.0.instance_ref.clone()
    }

    #[getter]
    fn algorithm(&self) -> String {
        self.0.algorithm.clone()
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.0.seed
    }

    /// Node indices of each route in visiting order.
    #[getter]
    fn routes(&self) -> Vec<Vec<usize>> {
        self.0.routes.iter().map(|r| r.nodes.clone()).collect()
    }

    #[getter]
    fn route_lengths(&self) -> Vec<f64> {
        self.0.routes.iter().map(|r| r.length).collect()
    }

    #[getter]
    fn total_length(&self) -> f64 {
        self.0.total_length()
    }

    #[getter]
    fn max_length(&self) -> f64 {
        self.0.max_length()
    }

    fn __repr__(&self) -> String {
        format!(
            "Solution(algorithm={:?}, k={}, total={:.4}, max={:.4})",
            self.0.algorithm,
            self.0.k,
            self.0.total_length(),
            self.0.max_length()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (sizes, count, seed, out_dir))]
fn generate_dataset(sizes: Vec<usize>, count: usize, seed: u64, out_dir: &str) -> PyResult<String> {
    instances::generate_dataset(&sizes, count, seed, out_dir)
        .map(|p| p.display().to_string())
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (inst, k=5, seed=0))]
fn hpp_solve(inst: &PyInstance, k: usize, seed: u64) -> PyResult<PySolution> {
    hpp::hpp_solve(&inst.0, k, seed).map(PySolution).map_err(to_py)
}

fn budget(max_iterations: usize, time_limit: Option<f64>) -> PyResult<SolverBudget> {
    let time_limit = time_limit
        .map(Duration::try_from_secs_f64)
        .transpose()
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(SolverBudget {
        max_iterations,
        time_limit,
    })
}

#[pyfunction]
#[pyo3(signature = (inst, k=5, seed=0, max_iterations=1000, time_limit=None))]
fn minmax_local_search(
    inst: &PyInstance,
    k: usize,
    seed: u64,
    max_iterations: usize,
    time_limit: Option<f64>,
) -> PyResult<PySolution> {
    baseline::minmax_local_search(&inst.0, k, seed, budget(max_iterations, time_limit)?)
        .map(PySolution)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (inst, k=2))]
fn exact_minmax(inst: &PyInstance, k: usize) -> PyResult<PySolution> {
    baseline::exact_minmax(&inst.0, k).map(PySolution).map_err(to_py)
}

/// Dispatches on the algorithm name: `hpp`, `minmax-ls` or `exact`.
#[pyfunction]
#[pyo3(signature = (algorithm, inst, k=5, seed=0, max_iterations=1000, time_limit=None))]
fn solve(
    algorithm: &str,
    inst: &PyInstance,
    k: usize,
    seed: u64,
    max_iterations: usize,
    time_limit: Option<f64>,
) -> PyResult<PySolution> {
    let alg: Algorithm = algorithm.parse().map_err(PyValueError::new_err)?;
    solver::solve(alg, &inst.0, k, seed, budget(max_iterations, time_limit)?)
        .map(PySolution)
        .map_err(to_py)
}

/// Recomputed metrics as a dict with `total_distance`, `max_route_length`
/// and `route_lengths`.
#[pyfunction]
fn score<'py>(py: Python<'py>, inst: &PyInstance, sol: &PySolution) -> PyResult<Bound<'py, PyDict>> {
    let m = evaluation::score(&inst.0, &sol.0).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("instance", m.instance)?;
    d.set_item("algorithm", m.algorithm)?;
    d.set_item("total_distance", m.total_distance)?;
    d.set_item("max_route_length", m.max_route_length)?;
    d.set_item("route_lengths", m.route_lengths)?;
    Ok(d)
}

#[pyfunction]
fn convex_hull(pts: Vec<(f64, f64)>) -> PyResult<Vec<(f64, f64)>> {
    geometry::convex_hull(&points(pts))
        .map(|h| tuples(h.vertices()))
        .map_err(to_py)
}

/// Antipodal vertex index pairs of a counter-clockwise convex polygon.
#[pyfunction]
fn antipodal_pairs(polygon: Vec<(f64, f64)>) -> PyResult<Vec<(usize, usize)>> {
    let poly = ConvexPolygon::new(points(polygon)).map_err(to_py)?;
    Ok(geometry::antipodal_pairs(&poly).into_iter().map(|p| (p.i, p.j)).collect())
}

#[pyfunction]
fn diameter(polygon: Vec<(f64, f64)>) -> PyResult<((usize, usize), f64)> {
    let poly = ConvexPolygon::new(points(polygon)).map_err(to_py)?;
    let (p, d) = geometry::diameter(&poly);
    Ok(((p.i, p.j), d))
}

/// Returns `(labels, centroids)`.
#[pyfunction]
#[pyo3(signature = (pts, k, seed=0))]
fn kmeans(pts: Vec<(f64, f64)>, k: usize, seed: u64) -> PyResult<(Vec<usize>, Vec<(f64, f64)>)> {
    let a = hpp::kmeans(&points(pts), k, seed).map_err(to_py)?;
    Ok((a.labels, tuples(&a.centroids)))
}

#[pymodule]
fn farmroute_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("FarmrouteError", m.py().get_type::<FarmrouteError>())?;
    m.add_class::<PyInstance>()?;
    m.add_class::<PySolution>()?;
    m.add_function(wrap_pyfunction!(generate_dataset, m)?)?;
    m.add_function(wrap_pyfunction!(hpp_solve, m)?)?;
    m.add_function(wrap_pyfunction!(minmax_local_search, m)?)?;
    m.add_function(wrap_pyfunction!(exact_minmax, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(score, m)?)?;
    m.add_function(wrap_pyfunction!(convex_hull, m)?)?;
    m.add_function(wrap_pyfunction!(antipodal_pairs, m)?)?;
    m.add_function(wrap_pyfunction!(diameter, m)?)?;
    m.add_function(wrap_pyfunction!(kmeans, m)?)?;
    Ok(())
}
