//! Python bindings. Vectors and matrices cross the boundary as (nested)
//! lists of Python `complex`; reports come back as dicts.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use csm_born::gleason::{reconstruct_density, FrameSample};
use csm_born::io::{parse, KsDocument, RayMapDoc};
use csm_born::measurement::simulate_sequence;
use csm_born::model::context_distribution;
use csm_born::partition::{search_assignment, Status};
use csm_born::topology::{orthogonal_obstruction, unitary_path_to_identity, Permutation};
use csm_born::uhlhorn::{fit_transform, Verdict};
use csm_born::{ComplexMatrix, ComplexVector, Tolerance};

fn err(e: csm_born::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn tolerance(tol: f64) -> PyResult<Tolerance> {
    Tolerance::with_abs(tol).map_err(err)
}

fn to_vector(entries: &[Complex64]) -> ComplexVector {
    ComplexVector::from_column_slice(entries)
}

fn to_matrix(rows: &[Vec<Complex64>]) -> PyResult<ComplexMatrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn from_vector(v: &ComplexVector) -> Vec<Complex64> {
    v.iter().copied().collect()
}

fn from_matrix(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// A complete set of mutually orthogonal rays.
#[pyclass(name = "Context", frozen)]
struct PyContext {
    inner: csm_born::Context,
}

#[pymethods]
impl PyContext {
    #[new]
    #[pyo3(signature = (vectors, label = "", tol = 1e-9))]
    fn new(vectors: Vec<Vec<Complex64>>, label: &str, tol: f64) -> PyResult<Self> {
        let vs: Vec<ComplexVector> = vectors.iter().map(|v| to_vector(v)).collect();
        let inner = csm_born::Context::new(&vs, label, &tolerance(tol)?).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (n, label = "standard"))]
    fn standard(n: usize, label: &str) -> Self {
        Self {
            inner: csm_born::Context::standard(n, label),
        }
    }

    #[staticmethod]
    #[pyo3(signature = (n, label = "fourier"))]
    fn fourier(n: usize, label: &str) -> Self {
        Self {
            inner: csm_born::Context::fourier(n, label),
        }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_owned()
    }

    fn vectors(&self) -> Vec<Vec<Complex64>> {
        self.inner.vectors().iter().map(from_vector).collect()
    }

    fn __repr__(&self) -> String {
        format!("Context(dim={}, label={:?})", self.inner.dim(), self.inner.label())
    }
}

/// Self-adjoint, positive, trace-one matrix.
#[pyclass(name = "DensityOperator", frozen)]
struct PyDensity {
    inner: csm_born::DensityOperator,
}

#[pymethods]
impl PyDensity {
    #[new]
    #[pyo3(signature = (matrix, tol = 1e-9))]
    fn new(matrix: Vec<Vec<Complex64>>, tol: f64) -> PyResult<Self> {
        let inner = csm_born::DensityOperator::new(to_matrix(&matrix)?, &tolerance(tol)?).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn maximally_mixed(n: usize) -> Self {
        Self {
            inner: csm_born::DensityOperator::maximally_mixed(n),
        }
    }

    #[staticmethod]
    fn pure(vector: Vec<Complex64>) -> PyResult<Self> {
        let p = csm_born::Projector::from_vector(&to_vector(&vector)).map_err(err)?;
        Ok(Self {
            inner: csm_born::DensityOperator::from_projector(&p),
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        from_matrix(self.inner.matrix())
    }
}

#[pyfunction]
fn born_probabilities(rho: &PyDensity, context: &PyContext) -> PyResult<Vec<f64>> {
    context_distribution(&rho.inner, &context.inner).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (vectors, values, tol = 1e-9))]
fn reconstruct<'py>(
    py: Python<'py>,
    vectors: Vec<Vec<Complex64>>,
    values: Vec<f64>,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    if vectors.len() != values.len() {
        return Err(PyValueError::new_err("vectors and values differ in length"));
    }
    let samples = vectors
        .iter()
        .zip(&values)
        .map(|(v, &x)| {
            let p = csm_born::Projector::from_vector(&to_vector(v))?;
            FrameSample::new(p, x)
        })
        .collect::<csm_born::Result<Vec<_>>>()
        .map_err(err)?;
    let report = reconstruct_density(&samples, &tolerance(tol)?).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("rho", from_matrix(report.rho.matrix()))?;
    out.set_item("residual_rms", report.residual_rms)?;
    out.set_item("condition_number", report.condition_number)?;
    out.set_item("psd_correction", report.psd_correction)?;
    out.set_item("design_rank", report.design_rank)?;
    Ok(out)
}

/// Certifies and fits a ray map given as a JSON document.
#[pyfunction]
#[pyo3(signature = (document, tol = 1e-9))]
fn fit_ray_map<'py>(py: Python<'py>, document: &str, tol: f64) -> PyResult<Bound<'py, PyDict>> {
    let tol = tolerance(tol)?;
    let map = parse::<RayMapDoc>(document)
        .and_then(|d| d.into_ray_map(&tol))
        .map_err(err)?;
    let fit = fit_transform(&map, &tol).map_err(err)?;
    let verdict = match fit.classification.verdict {
        Verdict::Unitary => "Unitary",
        Verdict::Antiunitary => "Antiunitary",
        Verdict::Neither => "Neither",
        Verdict::Inconclusive => "Inconclusive",
    };
    let out = PyDict::new(py);
    out.set_item("verdict", verdict)?;
    out.set_item("matrix", from_matrix(fit.transform.matrix()))?;
    out.set_item("antiunitary", fit.transform.is_antiunitary())?;
    out.set_item("residual", fit.residual)?;
    Ok(out)
}

/// Valuation search on a KS JSON document.
#[pyfunction]
#[pyo3(signature = (document, tol = 1e-9))]
fn ks_search<'py>(py: Python<'py>, document: &str, tol: f64) -> PyResult<Bound<'py, PyDict>> {
    let tol = tolerance(tol)?;
    let inst = parse::<KsDocument>(document)
        .and_then(|d| d.into_instance(&tol))
        .map_err(err)?;
    let r = search_assignment(&inst);
    let out = PyDict::new(py);
    out.set_item("status", if r.status == Status::Sat { "SAT" } else { "UNSAT" })?;
    out.set_item("assignment", r.assignment)?;
    out.set_item("nodes_explored", r.nodes_explored)?;
    out.set_item("certified", r.certificate.is_some())?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (images, steps = 101, tol = 1e-9))]
fn permutation_path<'py>(py: Python<'py>, images: Vec<usize>, steps: usize, tol: f64) -> PyResult<Bound<'py, PyDict>> {
    let sigma = Permutation::new(images).map_err(err)?;
    let report = unitary_path_to_identity(&sigma, steps, &tolerance(tol)?).map_err(err)?;
    let obstruction = orthogonal_obstruction(&sigma);
    let out = PyDict::new(py);
    out.set_item("max_unitarity_deviation", report.max_unitarity_deviation)?;
    out.set_item("endpoint_errors", report.endpoint_errors)?;
    out.set_item("max_step_distance", report.max_step_distance)?;
    out.set_item("det_sign", obstruction.det_sign)?;
    out.set_item("connected_in_orthogonal_group", obstruction.connected_in_orthogonal_group)?;
    Ok(out)
}

/// Outcome indices of one seeded run.
#[pyfunction]
#[pyo3(signature = (initial, contexts, seed = 0, tol = 1e-9))]
fn simulate(initial: Vec<Complex64>, contexts: Vec<PyRef<'_, PyContext>>, seed: u64, tol: f64) -> PyResult<Vec<usize>> {
    let start = csm_born::Projector::from_vector(&to_vector(&initial)).map_err(err)?;
    let cs: Vec<csm_born::Context> = contexts.iter().map(|c| c.inner.clone()).collect();
    let log = simulate_sequence(&start, &cs, seed, &tolerance(tol)?).map_err(err)?;
    Ok(log.into_iter().map(|o| o.index).collect())
}

#[pymodule]
#[pyo3(name = "csm_born")]
fn python_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyContext>()?;
    m.add_class::<PyDensity>()?;
    m.add_function(wrap_pyfunction!(born_probabilities, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(fit_ray_map, m)?)?;
    m.add_function(wrap_pyfunction!(ks_search, m)?)?;
    m.add_function(wrap_pyfunction!(permutation_path, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    Ok(())
}
