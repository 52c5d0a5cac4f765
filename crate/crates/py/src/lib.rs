//! Python module `clique_blowup`.

use ::clique_blowup as cb;
use cb::indexes;
use cb::report::{self, IndexOptions, Route, SpectrumSource};
use cb::verify::{self as cbverify, VerifyConfig};
use cb::{BlowupParams, Error, GraphSpec, Side};
use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(clique_blowup, BlowupError, PyValueError);
create_exception!(clique_blowup, SizeCapExceeded, BlowupError);

fn err(e: Error) -> PyErr {
    match e {
        Error::SizeCapExceeded { .. } => SizeCapExceeded::new_err(e.to_string()),
        other => BlowupError::new_err(other.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for cb::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(err)
    }
}

fn params(n: usize, r: usize) -> PyResult<BlowupParams> {
    BlowupParams::new(n, r).py()
}

fn to_fraction<'py>(py: Python<'py>, q: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((q.numer().clone(), q.denom().clone()))
}

// ints and Fractions both carry numerator/denominator
fn from_fraction(obj: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    let num: BigInt = obj.getattr("numerator")?.extract()?;
    let den: BigInt = obj.getattr("denominator")?.extract()?;
    if den == BigInt::from(0) {
        return Err(BlowupError::new_err("zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

#[pyclass(name = "Graph", module = "clique_blowup", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyGraph(cb::Graph);

#[pymethods]
impl PyGraph {
    #[new]
    fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyGraph(cb::Graph::from_edges(vertex_count, edges).py()?))
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyGraph(cb::Graph::parse_edge_list(text).py()?))
    }

    /// `"complete:4"`, `"path:3"`, `"cycle:5"`, `"star:5"` or `"petersen"`.
    #[staticmethod]
    fn generate(spec: &str) -> PyResult<Self> {
        let spec: GraphSpec = spec.parse().py()?;
        Ok(PyGraph(spec.build().py()?))
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.0.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.0.edge_count()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().to_vec()
    }

    fn degrees(&self) -> Vec<usize> {
        self.0.degrees()
    }

    fn is_connected(&self) -> bool {
        self.0.is_connected()
    }

    fn is_bipartite(&self) -> PyResult<bool> {
        self.0.is_bipartite().py()
    }

    /// `(X, Y, is_bipartite)`.
    fn bipartition(&self) -> PyResult<(Vec<usize>, Vec<usize>, bool)> {
        let b = self.0.bipartition().py()?;
        Ok((b.side(Side::X), b.side(Side::Y), b.is_bipartite))
    }

    fn incidence_rank(&self) -> PyResult<usize> {
        self.0.incidence_rank().py()
    }

    fn to_edge_list(&self) -> String {
        self.0.to_edge_list()
    }

    fn __repr__(&self) -> String {
        format!("Graph(N={}, E={})", self.0.vertex_count(), self.0.edge_count())
    }
}

#[pyclass(name = "Spectrum", module = "clique_blowup", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySpectrum(cb::SpectrumMultiset);

#[pymethods]
impl PySpectrum {
    #[new]
    #[pyo3(signature = (values, cluster_tol = cb::DEFAULT_CLUSTER_TOL))]
    fn new(values: Vec<f64>, cluster_tol: f64) -> Self {
        PySpectrum(cb::SpectrumMultiset::from_values(values, cluster_tol))
    }

    fn values(&self) -> Vec<f64> {
        self.0.values().to_vec()
    }

    /// Clustered `(value, multiplicity)` pairs.
    fn entries(&self) -> Vec<(f64, usize)> {
        self.0.entries()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    fn __len__(&self) -> usize {
        self.0.order()
    }

    fn __repr__(&self) -> String {
        format!("Spectrum({})", self.0.display_entries())
    }
}

#[pyfunction]
#[pyo3(name = "clique_blowup")]
fn blowup_once(g: &PyGraph, n: usize) -> PyResult<PyGraph> {
    Ok(PyGraph(cb::clique_blowup(&g.0, n).py()?))
}

#[pyfunction]
#[pyo3(signature = (g, n, r, max_vertices = cb::DEFAULT_MAX_VERTICES))]
fn blowup_iterate(g: &PyGraph, n: usize, r: usize, max_vertices: usize) -> PyResult<PyGraph> {
    Ok(PyGraph(cb::blowup_iterate(&g.0, &params(n, r)?, max_vertices).py()?))
}

/// `(N_r, E_r)` as Python ints.
#[pyfunction]
fn blowup_counts(n0: BigInt, e0: BigInt, n: usize, r: usize) -> PyResult<(BigInt, BigInt)> {
    let c = cb::blowup_counts(&n0, &e0, &params(n, r)?).py()?;
    Ok((c.vertices, c.edges))
}

#[pyfunction]
#[pyo3(signature = (g, cluster_tol = cb::DEFAULT_CLUSTER_TOL))]
fn laplacian_spectrum(g: &PyGraph, cluster_tol: f64) -> PyResult<PySpectrum> {
    Ok(PySpectrum(cb::laplacian_spectrum(&g.0, cluster_tol).py()?))
}

#[pyfunction]
fn spectrum_by_theorem(sigma: &PySpectrum, n0: usize, e0: usize, n: usize, bipartite: bool) -> PyResult<PySpectrum> {
    Ok(PySpectrum(cb::spectrum_by_theorem(&sigma.0, n0, e0, n, bipartite).py()?))
}

#[pyfunction]
#[pyo3(signature = (sigma, n0, e0, n, r, bipartite, max_order = cb::DEFAULT_MAX_VERTICES))]
fn spectrum_iterated(
    sigma: &PySpectrum,
    n0: usize,
    e0: usize,
    n: usize,
    r: usize,
    bipartite: bool,
    max_order: usize,
) -> PyResult<PySpectrum> {
    let p = params(n, r)?;
    Ok(PySpectrum(cb::spectrum_iterated(&sigma.0, n0, e0, &p, bipartite, max_order).py()?))
}

/// `(matched, description)`.
#[pyfunction]
#[pyo3(signature = (a, b, tol = cb::DEFAULT_MATCH_TOL))]
fn multiset_match(a: &PySpectrum, b: &PySpectrum, tol: f64) -> (bool, String) {
    let m = cb::multiset_match(&a.0, &b.0, tol);
    (m.matched, m.describe())
}

#[pyfunction]
fn kf_star_spectral(sigma: &PySpectrum, m: BigInt) -> PyResult<f64> {
    indexes::kf_star_spectral(&sigma.0, &m).py()
}

#[pyfunction]
fn kemeny_spectral(sigma: &PySpectrum) -> PyResult<f64> {
    indexes::kemeny_spectral(&sigma.0).py()
}

#[pyfunction]
fn tau_spectral(g: &PyGraph, sigma: &PySpectrum) -> PyResult<f64> {
    indexes::tau_spectral(&g.0, &sigma.0).py()
}

#[pyfunction]
fn log_tau_spectral(g: &PyGraph, sigma: &PySpectrum) -> PyResult<f64> {
    indexes::log_tau_spectral(&g.0, &sigma.0).py()
}

#[pyfunction]
fn kf_star_direct(g: &PyGraph) -> PyResult<f64> {
    indexes::kf_star_direct(&g.0).py()
}

#[pyfunction]
#[pyo3(signature = (g, cap = cb::DEFAULT_EXACT_CAP))]
fn tau_exact(g: &PyGraph, cap: usize) -> PyResult<BigInt> {
    indexes::tau_exact(&g.0, cap).py()
}

#[pyfunction]
#[pyo3(signature = (g, cap = cb::DEFAULT_EXACT_CAP))]
fn kf_star_exact<'py>(py: Python<'py>, g: &PyGraph, cap: usize) -> PyResult<Bound<'py, PyAny>> {
    to_fraction(py, &indexes::kf_star_exact(&g.0, cap).py()?)
}

#[pyfunction]
fn kf_star_blowup_closed<'py>(
    py: Python<'py>,
    kf: &Bound<'py, PyAny>,
    n0: BigInt,
    e0: BigInt,
    n: usize,
    r: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let out = indexes::kf_star_blowup_closed(&from_fraction(kf)?, &n0, &e0, &params(n, r)?).py()?;
    to_fraction(py, &out)
}

#[pyfunction]
fn kemeny_blowup_closed<'py>(
    py: Python<'py>,
    ke: &Bound<'py, PyAny>,
    n0: BigInt,
    e0: BigInt,
    n: usize,
    r: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let out = indexes::kemeny_blowup_closed(&from_fraction(ke)?, &n0, &e0, &params(n, r)?).py()?;
    to_fraction(py, &out)
}

#[pyfunction]
fn tau_blowup_closed(tau: BigInt, n0: BigInt, e0: BigInt, n: usize, r: usize) -> PyResult<BigInt> {
    indexes::tau_blowup_closed(&tau, &n0, &e0, &params(n, r)?).py()
}

/// Index report for `CL_r(G)` as a JSON string.
#[pyfunction]
#[pyo3(signature = (g, n, r, route = "spectral", source = "numeric"))]
fn index_report(g: &PyGraph, n: usize, r: usize, route: &str, source: &str) -> PyResult<String> {
    let route: Route = route.parse().py()?;
    let source = match source {
        "numeric" => SpectrumSource::Numeric,
        "theorem" => SpectrumSource::Theorem,
        other => return Err(BlowupError::new_err(format!("unknown spectrum source {other:?}"))),
    };
    let rep = report::indexes_by_route(&g.0, &params(n, r)?, route, source, &IndexOptions::default()).py()?;
    Ok(rep.to_json())
}

/// Runs the verification matrix; returns `(passed, matrix_text)`.
#[pyfunction]
#[pyo3(signature = (corpus = None, ns = vec![3, 4, 5], rs = vec![1, 2], jobs = 1))]
fn verify(py: Python<'_>, corpus: Option<Vec<String>>, ns: Vec<usize>, rs: Vec<usize>, jobs: usize) -> PyResult<(bool, String)> {
    let mut cfg = VerifyConfig { ns, rs, jobs, ..VerifyConfig::default() };
    if let Some(specs) = corpus {
        cfg.corpus = specs.iter().map(|s| s.parse()).collect::<cb::Result<_>>().py()?;
    }
    let rep = py.detach(|| cbverify::verify(&cfg)).py()?;
    Ok((rep.passed(), rep.matrix()))
}

#[pymodule(name = "clique_blowup")]
fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("BlowupError", py.get_type::<BlowupError>())?;
    m.add("SizeCapExceeded", py.get_type::<SizeCapExceeded>())?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PySpectrum>()?;
    m.add_function(wrap_pyfunction!(blowup_once, m)?)?;
    m.add_function(wrap_pyfunction!(blowup_iterate, m)?)?;
    m.add_function(wrap_pyfunction!(blowup_counts, m)?)?;
    m.add_function(wrap_pyfunction!(laplacian_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum_by_theorem, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum_iterated, m)?)?;
    m.add_function(wrap_pyfunction!(multiset_match, m)?)?;
    m.add_function(wrap_pyfunction!(kf_star_spectral, m)?)?;
    m.add_function(wrap_pyfunction!(kemeny_spectral, m)?)?;
    m.add_function(wrap_pyfunction!(tau_spectral, m)?)?;
    m.add_function(wrap_pyfunction!(log_tau_spectral, m)?)?;
    m.add_function(wrap_pyfunction!(kf_star_direct, m)?)?;
    m.add_function(wrap_pyfunction!(tau_exact, m)?)?;
    m.add_function(wrap_pyfunction!(kf_star_exact, m)?)?;
    m.add_function(wrap_pyfunction!(kf_star_blowup_closed, m)?)?;
    m.add_function(wrap_pyfunction!(kemeny_blowup_closed, m)?)?;
    m.add_function(wrap_pyfunction!(tau_blowup_closed, m)?)?;
    m.add_function(wrap_pyfunction!(index_report, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
