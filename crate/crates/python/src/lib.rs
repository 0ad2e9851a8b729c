//! Python module `stabpurity`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use stabpurity::{estimator, oracle, simulator, stabdiag, stabilizer};
use stabpurity::{CoeffVector, GraphSpec, MeasurementRecord, NoiseParams, ShotPlan, Spectrum};

fn err(e: stabpurity::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn record(a: Vec<f64>, delta_a: Option<Vec<f64>>) -> PyResult<MeasurementRecord> {
    let delta = delta_a.unwrap_or_else(|| vec![0.0; a.len()]);
    MeasurementRecord::new(a, delta).map_err(err)
}

#[pyclass(name = "Graph", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGraph(GraphSpec);

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        GraphSpec::new(n, edges).map(PyGraph).map_err(err)
    }

    /// `path-N`, `ring-N` or `star-N`.
    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        GraphSpec::preset(name).map(PyGraph).map_err(err)
    }

    #[staticmethod]
    fn path(n: usize) -> PyResult<Self> {
        GraphSpec::path(n).map(PyGraph).map_err(err)
    }

    #[staticmethod]
    fn ring(n: usize) -> PyResult<Self> {
        GraphSpec::ring(n).map(PyGraph).map_err(err)
    }

    #[staticmethod]
    fn star(n: usize) -> PyResult<Self> {
        GraphSpec::star(n).map(PyGraph).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().to_vec()
    }

    fn neighbors(&self, v: usize) -> Vec<usize> {
        self.0.neighbors(v).collect()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={:?})", self.0.n(), self.0.edges())
    }
}

#[pyclass(name = "PurityEstimate", frozen, get_all)]
struct PyPurityEstimate {
    p_min: f64,
    p_lower: Option<f64>,
    p_upper: Option<f64>,
    lambda0: f64,
    bounds_feasible: bool,
    certified_optimal: bool,
}

#[pyclass(name = "KktCertificate", frozen, get_all)]
struct PyKktCertificate {
    mu: Vec<f64>,
    nu: Vec<f64>,
    lambda_: Vec<f64>,
    stationarity_residual: f64,
    min_mu: f64,
    complementarity_residual: f64,
    valid: bool,
}

/// Generators `K_j = X_j Z_N(j)` as signed Pauli strings, qubit 0 first.
#[pyfunction]
fn generators(graph: &PyGraph) -> Vec<String> {
    stabilizer::generators(&graph.0)
        .iter()
        .map(ToString::to_string)
        .collect()
}

/// Product of the generators selected by the bits of `index`.
#[pyfunction]
fn stabilizer_element(graph: &PyGraph, index: usize) -> PyResult<String> {
    let n = graph.0.n();
    if n < usize::BITS as usize && index >> n != 0 {
        return Err(PyValueError::new_err(format!(
            "index {index} has more than {n} bits"
        )));
    }
    Ok(stabilizer::stabilizer_element(&graph.0, index).to_string())
}

#[pyfunction]
fn eigenvalues(c: Vec<f64>) -> PyResult<Vec<f64>> {
    let c = CoeffVector::new(c).map_err(err)?;
    Ok(stabdiag::eigenvalues(&c).into_vec())
}

#[pyfunction]
fn coefficients(lam: Vec<f64>) -> PyResult<Vec<f64>> {
    let s = Spectrum::new(lam).map_err(err)?;
    stabdiag::coefficients(&s)
        .map(CoeffVector::into_vec)
        .map_err(err)
}

#[pyfunction]
fn purity(c: Vec<f64>) -> PyResult<f64> {
    Ok(stabdiag::purity(&CoeffVector::new(c).map_err(err)?))
}

/// Von Neumann entropy in nats.
#[pyfunction]
fn entropy(lam: Vec<f64>) -> PyResult<f64> {
    stabdiag::entropy(&Spectrum::new(lam).map_err(err)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, delta_a=None))]
fn min_purity(a: Vec<f64>, delta_a: Option<Vec<f64>>) -> PyResult<PyPurityEstimate> {
    let est = estimator::min_purity(&record(a, delta_a)?).map_err(err)?;
    Ok(PyPurityEstimate {
        p_min: est.p_min,
        p_lower: est.p_lower,
        p_upper: est.p_upper,
        lambda0: est.lambda0(),
        bounds_feasible: est.bounds_feasible,
        certified_optimal: est.certified_optimal,
    })
}

/// `(p_lower, p_upper)`, `None` where a bound is infeasible.
#[pyfunction]
fn purity_error_bars(a: Vec<f64>, delta_a: Vec<f64>) -> PyResult<(Option<f64>, Option<f64>)> {
    let (lo, hi) = estimator::purity_error_bars(&record(a, Some(delta_a))?);
    Ok((lo.ok(), hi.ok()))
}

/// Certificate for the closed-form candidate; `valid` reports whether every
/// KKT condition holds.
#[pyfunction]
fn kkt_certificate(a: Vec<f64>) -> PyResult<PyKktCertificate> {
    let cert = estimator::build_kkt_certificate(&record(a, None)?).map_err(err)?;
    Ok(PyKktCertificate {
        valid: cert.is_valid(),
        stationarity_residual: cert.stationarity_residual,
        min_mu: cert.min_mu,
        complementarity_residual: cert.complementarity_residual,
        mu: cert.mu,
        nu: cert.nu,
        lambda_: cert.lambda,
    })
}

#[pyfunction]
fn entropy_lower_bound(a: Vec<f64>) -> PyResult<f64> {
    estimator::entropy_lower_bound(&record(a, None)?).map_err(err)
}

#[pyfunction]
fn entropy_max(a: Vec<f64>) -> PyResult<f64> {
    Ok(estimator::entropy_max(&record(a, None)?))
}

/// Numeric least purity: `(objective, eigenvalues)`.
#[pyfunction]
fn qp_min_purity(a: Vec<f64>) -> PyResult<(f64, Vec<f64>)> {
    let sol = oracle::qp_min_purity(&record(a, None)?).map_err(err)?;
    Ok((sol.objective, sol.lambda_star))
}

#[pyfunction]
fn max_entropy_numeric(a: Vec<f64>) -> PyResult<f64> {
    oracle::max_entropy_numeric(&record(a, None)?)
        .map(|s| s.entropy)
        .map_err(err)
}

fn noise(gamma_t: f64) -> PyResult<NoiseParams> {
    NoiseParams::from_gamma_t(gamma_t).map_err(err)
}

#[pyfunction]
fn dephased_coefficients(graph: &PyGraph, gamma_t: f64) -> PyResult<Vec<f64>> {
    simulator::dephased_coefficients(&graph.0, &noise(gamma_t)?)
        .map(CoeffVector::into_vec)
        .map_err(err)
}

#[pyfunction]
fn dephased_expectations(graph: &PyGraph, gamma_t: f64) -> PyResult<Vec<f64>> {
    Ok(simulator::dephased_expectations(&graph.0, &noise(gamma_t)?))
}

#[pyfunction]
fn exact_purity_dephased(graph: &PyGraph, gamma_t: f64) -> PyResult<f64> {
    Ok(simulator::exact_purity_dephased(&graph.0, &noise(gamma_t)?))
}

#[pyfunction]
fn exact_entropy_dephased(graph: &PyGraph, gamma_t: f64) -> PyResult<f64> {
    Ok(simulator::exact_entropy_dephased(
        &graph.0,
        &noise(gamma_t)?,
    ))
}

/// Seeded shot sampling: `(a_hat, delta_a)`.
#[pyfunction]
fn sample_measurements(a: Vec<f64>, shots: u64, seed: u64) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let plan = ShotPlan::new(shots, seed).map_err(err)?;
    let r = simulator::sample_measurements(&a, &plan).map_err(err)?;
    Ok((r.a().to_vec(), r.delta_a().to_vec()))
}

#[pymodule]
#[pyo3(name = "stabpurity")]
fn stabpurity_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", stabpurity::VERSION)?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyPurityEstimate>()?;
    m.add_class::<PyKktCertificate>()?;
    m.add_function(wrap_pyfunction!(generators, m)?)?;
    m.add_function(wrap_pyfunction!(stabilizer_element, m)?)?;
    m.add_function(wrap_pyfunction!(eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(purity, m)?)?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(min_purity, m)?)?;
    m.add_function(wrap_pyfunction!(purity_error_bars, m)?)?;
    m.add_function(wrap_pyfunction!(kkt_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(entropy_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(entropy_max, m)?)?;
    m.add_function(wrap_pyfunction!(qp_min_purity, m)?)?;
    m.add_function(wrap_pyfunction!(max_entropy_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(dephased_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(dephased_expectations, m)?)?;
    m.add_function(wrap_pyfunction!(exact_purity_dephased, m)?)?;
    m.add_function(wrap_pyfunction!(exact_entropy_dephased, m)?)?;
    m.add_function(wrap_pyfunction!(sample_measurements, m)?)?;
    Ok(())
}
