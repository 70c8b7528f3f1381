//! Python bindings for `equinorm`.

use equinorm::clustering::{self, ClusteringMode};
use equinorm::covering::{self, CoveringOptions};
use equinorm::mlij;
use equinorm::norms;
use equinorm::portfolio::{self as pf, FiniteDomain};
use equinorm::satisfaction::{self as sat, SatisfactionProblem, EXHAUSTIVE_CAP};
use equinorm::{CostVector, Error};
use pyo3::exceptions::{PyException, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

pyo3::create_exception!(equinorm, SizeCapError, PyException, "An enumeration exceeded its size cap.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::SizeCap { .. } => SizeCapError::new_err(e.to_string()),
        Error::Numeric(_) | Error::NonTermination(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> OrPy<T> for equinorm::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

fn rows(vs: &[CostVector]) -> Vec<Vec<f64>> {
    vs.iter().map(|v| v.as_slice().to_vec()).collect()
}

/// Nonincreasing nonnegative weights with a positive first entry.
#[pyclass(name = "WeightVector", frozen)]
struct PyWeightVector(norms::WeightVector);

#[pymethods]
impl PyWeightVector {
    #[new]
    fn new(values: Vec<f64>) -> PyResult<Self> {
        norms::WeightVector::new(values).py_err().map(Self)
    }

    #[staticmethod]
    fn top_k(d: usize, k: usize) -> PyResult<Self> {
        norms::WeightVector::top_k(d, k).py_err().map(Self)
    }

    fn values(&self) -> Vec<f64> {
        self.0.as_slice().to_vec()
    }

    /// Ordered norm of `x` under these weights.
    fn norm(&self, x: Vec<f64>) -> PyResult<f64> {
        norms::ordered_norm(&x, &self.0).py_err()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("WeightVector({:?})", self.0.as_slice())
    }
}

fn weight(values: Vec<f64>) -> PyResult<norms::WeightVector> {
    norms::WeightVector::new(values).py_err()
}

#[pyfunction]
fn top_k_norm(x: Vec<f64>, k: usize) -> PyResult<f64> {
    norms::top_k_norm(&x, k).py_err()
}

#[pyfunction]
fn ordered_norm(x: Vec<f64>, w: Vec<f64>) -> PyResult<f64> {
    norms::ordered_norm(&x, &weight(w)?).py_err()
}

#[pyfunction]
fn dual_ordered_norm(y: Vec<f64>, w: Vec<f64>) -> PyResult<f64> {
    norms::dual_ordered_norm(&y, &weight(w)?).py_err()
}

/// `True` when `x` is majorized by `y`.
#[pyfunction]
fn majorizes(x: Vec<f64>, y: Vec<f64>) -> PyResult<bool> {
    norms::majorizes(&x, &y).py_err()
}

#[pyfunction]
fn sample_weights(d: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    equinorm::weights::sample_weights(d, count, seed)
        .into_iter()
        .map(|w| w.as_slice().to_vec())
        .collect()
}

fn domain(vectors: Vec<Vec<f64>>) -> PyResult<FiniteDomain> {
    FiniteDomain::from_rows(vectors).py_err()
}

/// Returns `(ratio, worst_k)` of `portfolio` against `domain` over all top-k norms.
#[pyfunction]
fn certify_topk_ratio(portfolio: Vec<Vec<f64>>, domain_vectors: Vec<Vec<f64>>) -> PyResult<(f64, usize)> {
    let p = domain(portfolio)?;
    let d = domain(domain_vectors)?;
    let c = pf::certify_topk_ratio(&p.vectors, &d.vectors).py_err()?;
    Ok((c.ratio, c.worst_k))
}

#[pyfunction]
fn bucket_portfolio(vectors: Vec<Vec<f64>>, eps: f64) -> PyResult<Vec<Vec<f64>>> {
    let b = pf::bucket_portfolio(&domain(vectors)?, eps).py_err()?;
    Ok(rows(&b.portfolio.vectors))
}

/// Identical jobs on machines with per-job times `p`.
#[pyclass(name = "MlijInstance", frozen)]
struct PyMlijInstance(mlij::MlijInstance);

#[pymethods]
impl PyMlijInstance {
    #[new]
    fn new(p: Vec<f64>, n: u64) -> PyResult<Self> {
        mlij::MlijInstance::new(p, n).py_err().map(Self)
    }

    #[getter]
    fn p(&self) -> Vec<f64> {
        self.0.input_p()
    }

    #[getter]
    fn n(&self) -> u64 {
        self.0.n()
    }

    /// Load vector of every complete schedule, machines sorted by time.
    #[pyo3(signature = (cap = mlij::BRUTE_FORCE_CAP))]
    fn load_vectors(&self, cap: f64) -> PyResult<Vec<Vec<f64>>> {
        Ok(rows(&mlij::brute_force_schedules(&self.0, cap).py_err()?.vectors))
    }

    fn build_portfolio<'py>(&self, py: Python<'py>, alpha: f64) -> PyResult<Bound<'py, PyDict>> {
        self.describe(py, mlij::build_portfolio(&self.0, alpha).py_err()?)
    }

    fn topk_two_portfolio<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        self.describe(py, mlij::topk_two_portfolio(&self.0).py_err()?)
    }

    fn __repr__(&self) -> String {
        format!("MlijInstance(p={:?}, n={})", self.0.input_p(), self.0.n())
    }
}

impl PyMlijInstance {
    fn describe<'py>(&self, py: Python<'py>, port: mlij::MlijPortfolio) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        d.set_item("schedules", port.input_order_schedules(&self.0))?;
        let loads: Vec<Vec<f64>> = port
            .portfolio
            .vectors
            .iter()
            .map(|v| self.0.to_input_order(v.as_slice()))
            .collect();
        d.set_item("loads", loads)?;
        d.set_item("indices", port.indices)?;
        d.set_item("alpha", port.portfolio.alpha.numeric())?;
        Ok(d)
    }
}

/// `{x >= 0 : A x >= b}` with `b > 0`.
#[pyclass(name = "CoveringPolyhedron", frozen)]
struct PyCoveringPolyhedron(covering::CoveringPolyhedron);

#[pymethods]
impl PyCoveringPolyhedron {
    #[new]
    fn new(a: Vec<Vec<f64>>, b: Vec<f64>) -> PyResult<Self> {
        covering::normalize(a, b).py_err().map(Self)
    }

    /// Rows scaled so that every right-hand side is one.
    fn rows(&self) -> Vec<Vec<f64>> {
        self.0.rows().to_vec()
    }

    #[pyo3(signature = (x, tol = 1e-9))]
    fn contains(&self, x: Vec<f64>, tol: f64) -> bool {
        self.0.contains(&x, tol)
    }

    /// Returns `(x, value)` minimising the ordered norm with weights `w`.
    fn min_ordered_norm(&self, w: Vec<f64>) -> PyResult<(Vec<f64>, f64)> {
        covering::lp_min_ordered_norm(&self.0, &weight(w)?).py_err()
    }

    #[pyo3(signature = (eps, sparsify = true))]
    fn build_portfolio<'py>(&self, py: Python<'py>, eps: f64, sparsify: bool) -> PyResult<Bound<'py, PyDict>> {
        let opts = CoveringOptions {
            sparsify,
            ..Default::default()
        };
        let port = covering::build_portfolio(&self.0, eps, opts).py_err()?;
        let d = PyDict::new(py);
        d.set_item("vectors", rows(&port.portfolio.vectors))?;
        d.set_item("orders", port.orders.orders)?;
        d.set_item("groups", port.groups.groups)?;
        d.set_item("alpha", port.portfolio.alpha.numeric())?;
        Ok(d)
    }
}

fn ordering_result<'py>(
    py: Python<'py>,
    problem: &dyn SatisfactionProblem,
    res: sat::IterativeOrderingResult,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("times", sat::satisfaction_times(problem, &res.satisfier).py_err()?)?;
    d.set_item("labels", res.satisfier.order.iter().map(|&o| problem.object_label(o)).collect::<Vec<_>>())?;
    d.set_item("order", res.satisfier.order)?;
    d.set_item("budgets", res.budgets)?;
    d.set_item("guarantee", res.guarantee)?;
    Ok(d)
}

/// Min-sum set cover ordering from exhaustive satisfiers.
#[pyfunction]
fn set_cover_ordering<'py>(py: Python<'py>, n_elements: usize, sets: Vec<Vec<usize>>) -> PyResult<Bound<'py, PyDict>> {
    let p = sat::make_set_cover(n_elements, sets).py_err()?;
    let res = sat::iterative_ordering_exhaustive(&p, EXHAUSTIVE_CAP).py_err()?;
    ordering_result(py, &p, res)
}

#[pyfunction]
fn vertex_cover_ordering<'py>(
    py: Python<'py>,
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
) -> PyResult<Bound<'py, PyDict>> {
    let p = sat::make_vertex_cover(n_vertices, edges).py_err()?;
    let res = sat::iterative_ordering_exhaustive(&p, EXHAUSTIVE_CAP).py_err()?;
    ordering_result(py, &p, res)
}

/// Completion-time ordering; `p[job][machine]`. The `lp` oracle rounds the
/// linear relaxation, `exhaustive` enumerates.
#[pyfunction]
#[pyo3(signature = (p, oracle = "lp"))]
fn completion_times_ordering<'py>(py: Python<'py>, p: Vec<Vec<f64>>, oracle: &str) -> PyResult<Bound<'py, PyDict>> {
    let inst = sat::make_completion_times(p).py_err()?;
    let res = match oracle {
        "lp" => sat::iterative_ordering(&inst, 2.0, &mut |b| sat::completion_times_satisfier(&inst, b)),
        "exhaustive" => sat::iterative_ordering_exhaustive(&inst, EXHAUSTIVE_CAP),
        other => return Err(PyValueError::new_err(format!("unknown oracle '{other}'"))),
    }
    .py_err()?;
    ordering_result(py, &inst, res)
}

#[pyfunction]
fn tsp_ordering<'py>(py: Python<'py>, dist: Vec<Vec<f64>>, v0: usize) -> PyResult<Bound<'py, PyDict>> {
    let p = sat::make_tsp(dist, v0).py_err()?;
    let res = sat::iterative_ordering_exhaustive(&p, EXHAUSTIVE_CAP).py_err()?;
    ordering_result(py, &p, res)
}

/// Finite metric; `allowed` restricts facility locations.
#[pyclass(name = "Metric", frozen)]
struct PyMetric(clustering::Metric);

#[pymethods]
impl PyMetric {
    #[new]
    #[pyo3(signature = (dist, allowed = None))]
    fn new(dist: Vec<Vec<f64>>, allowed: Option<Vec<usize>>) -> PyResult<Self> {
        match allowed {
            Some(a) => clustering::Metric::with_allowed(dist, a),
            None => clustering::Metric::new(dist),
        }
        .py_err()
        .map(Self)
    }

    #[staticmethod]
    fn star(n: usize) -> PyResult<Self> {
        clustering::star_metric(n).py_err().map(Self)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn distance_vector(&self, facilities: Vec<usize>) -> PyResult<Vec<f64>> {
        Ok(clustering::distance_vector(&self.0, &facilities).py_err()?.into_vec())
    }

    #[pyo3(signature = (k, eps, mode = "exact"))]
    fn iterative_clustering<'py>(
        &self,
        py: Python<'py>,
        k: usize,
        eps: f64,
        mode: &str,
    ) -> PyResult<Bound<'py, PyDict>> {
        let mode = match mode {
            "exact" => ClusteringMode::Exact,
            "greedy3" => ClusteringMode::Greedy3,
            other => return Err(PyValueError::new_err(format!("unknown mode '{other}'"))),
        };
        let r = clustering::iterative_clustering(&self.0, k, eps, mode).py_err()?;
        let d = PyDict::new(py);
        d.set_item("facilities", r.facilities)?;
        d.set_item("radii", r.radii)?;
        d.set_item("facility_bound", r.facility_bound)?;
        d.set_item("opened_all", r.opened_all)?;
        d.set_item("guarantee", r.guarantee)?;
        Ok(d)
    }

    /// Facility sets of the facility-location portfolio.
    fn ufl_portfolio(&self) -> PyResult<Vec<Vec<usize>>> {
        Ok(clustering::ufl_portfolio(&self.0).py_err()?.facility_sets)
    }
}

#[pymodule]
#[pyo3(name = "equinorm")]
fn equinorm_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SizeCapError", m.py().get_type::<SizeCapError>())?;
    m.add_class::<PyWeightVector>()?;
    m.add_class::<PyMlijInstance>()?;
    m.add_class::<PyCoveringPolyhedron>()?;
    m.add_class::<PyMetric>()?;
    m.add_function(wrap_pyfunction!(top_k_norm, m)?)?;
    m.add_function(wrap_pyfunction!(ordered_norm, m)?)?;
    m.add_function(wrap_pyfunction!(dual_ordered_norm, m)?)?;
    m.add_function(wrap_pyfunction!(majorizes, m)?)?;
    m.add_function(wrap_pyfunction!(sample_weights, m)?)?;
    m.add_function(wrap_pyfunction!(certify_topk_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(bucket_portfolio, m)?)?;
    m.add_function(wrap_pyfunction!(set_cover_ordering, m)?)?;
    m.add_function(wrap_pyfunction!(vertex_cover_ordering, m)?)?;
    m.add_function(wrap_pyfunction!(completion_times_ordering, m)?)?;
    m.add_function(wrap_pyfunction!(tsp_ordering, m)?)?;
    Ok(())
}
