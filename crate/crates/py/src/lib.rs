use ggcode_core::certificate::certify;
use ggcode_core::fixtures::{example, fixture_k333, fixture_k777};
use ggcode_core::spec::{parse_code, parse_graph, parse_inner_codes};
use ggcode_core::{
    BoundOutcome, EdgeAssignment, EdgeOrder, Engine, Error, FieldSpec, GeneralizedGraphCode,
    GfMatrix, LinearCode, SearchOptions,
};
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Capacity(_) | Error::Numeric(_) => PyRuntimeError::new_err(e.to_string()),
        Error::Io(_) => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn engine(name: &str) -> PyResult<SearchOptions<'static>> {
    let engine: Engine = name.parse().map_err(py_err)?;
    Ok(SearchOptions {
        engine,
        ..Default::default()
    })
}

fn to_json<T: serde::Serialize>(v: &T) -> PyResult<String> {
    serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// A linear code over GF(q).
#[pyclass(name = "LinearCode", frozen)]
struct PyLinearCode(LinearCode);

#[pymethods]
impl PyLinearCode {
    /// Parses a builtin spec such as `hamming:3` or `dsum:even:4,rep:3`.
    #[staticmethod]
    fn from_spec(spec: &str) -> PyResult<Self> {
        parse_code(spec).map(Self).map_err(py_err)
    }

    #[staticmethod]
    #[pyo3(signature = (rows, q = 2))]
    fn from_generator(rows: Vec<Vec<u32>>, q: u32) -> PyResult<Self> {
        let f = FieldSpec::new(q).map_err(py_err)?;
        let g = GfMatrix::from_rows(&f, &rows).map_err(py_err)?;
        LinearCode::from_generator(g).map(Self).map_err(py_err)
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name().to_string()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.0.field().order()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.len()
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.dimension()
    }

    #[pyo3(signature = (engine = "auto"))]
    fn min_distance(&self, py: Python<'_>, engine: &str) -> PyResult<usize> {
        let opts = self::engine(engine)?;
        let code = &self.0;
        let (b, _) = py
            .detach(|| code.search_min_distance(&opts))
            .map_err(py_err)?;
        Ok(b.value().expect("no deadline"))
    }

    fn is_codeword(&self, word: Vec<u32>) -> PyResult<bool> {
        self.0.is_codeword(&word).map_err(py_err)
    }

    fn encode(&self, message: Vec<u32>) -> PyResult<Vec<u32>> {
        self.0.encode(&message).map(|c| c.0).map_err(py_err)
    }

    fn generator(&self) -> Vec<Vec<u32>> {
        self.0.generator().to_rows()
    }

    fn parity_check(&self) -> Vec<Vec<u32>> {
        self.0.parity_check().to_rows()
    }

    fn __repr__(&self) -> String {
        format!("LinearCode({}, n={}, k={})", self.0.name(), self.0.len(), self.0.dimension())
    }
}

/// A generalized graph code. Vertex labels are 1-based.
#[pyclass(name = "GraphCode", frozen)]
struct PyGraphCode(GeneralizedGraphCode);

#[pymethods]
impl PyGraphCode {
    /// `graph` is `complete:<ell>,<m>` or a graph file; `inner` is one code
    /// spec for all parts or one per part.
    #[staticmethod]
    #[pyo3(signature = (graph, inner, order = "canonical"))]
    fn from_spec(graph: &str, inner: &str, order: &str) -> PyResult<Self> {
        let order: EdgeOrder = order.parse().map_err(py_err)?;
        let g = parse_graph(graph, order).map_err(py_err)?;
        let inner = parse_inner_codes(inner, g.ell()).map_err(py_err)?;
        GeneralizedGraphCode::build(g, inner).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn k777() -> Self {
        Self(fixture_k777())
    }

    #[staticmethod]
    fn k333() -> Self {
        Self(fixture_k333())
    }

    #[getter]
    fn length(&self) -> usize {
        self.0.len()
    }

    #[getter]
    fn ell(&self) -> usize {
        self.0.ell()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn dimension(&self) -> usize {
        self.0.dimension()
    }

    /// Exact minimum distance, or `None` for the zero code.
    #[pyo3(signature = (engine = "auto"))]
    fn min_distance(&self, py: Python<'_>, engine: &str) -> PyResult<Option<usize>> {
        let opts = self::engine(engine)?;
        let gc = &self.0;
        let r = py.detach(|| gc.minimum_distance(&opts)).map_err(py_err)?;
        Ok(r.and_then(|(b, _)| b.value()))
    }

    fn lambda2(&self) -> PyResult<f64> {
        self.0.lambda2().map(|l| l.as_f64()).map_err(py_err)
    }

    /// Bound as an exact string such as `9/2`, or `None` when it does not apply.
    fn theorem_bound(&self) -> PyResult<Option<String>> {
        Ok(match self.0.theorem_bound().map_err(py_err)? {
            BoundOutcome::Applicable(b) => Some(b.to_string()),
            BoundOutcome::NotApplicable(_) => None,
        })
    }

    /// Edges as 1-based label pairs in coordinate order.
    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.graph().edges().iter().map(|&(u, w)| (u + 1, w + 1)).collect()
    }

    fn local_view(&self, assignment: Vec<u32>, vertex: usize) -> PyResult<Vec<u32>> {
        if vertex == 0 {
            return Err(PyValueError::new_err("vertex labels start at 1"));
        }
        self.0
            .local_view(&EdgeAssignment(assignment), vertex - 1)
            .map(|c| c.0)
            .map_err(py_err)
    }

    /// `(is_member, failing vertex labels)`.
    fn verify(&self, assignment: Vec<u32>) -> PyResult<(bool, Vec<usize>)> {
        let r = self
            .0
            .verify_membership(&EdgeAssignment(assignment))
            .map_err(py_err)?;
        Ok((r.is_member, r.failing_vertices))
    }

    fn encode(&self, message: Vec<u32>) -> PyResult<Vec<u32>> {
        self.0.encode(&message).map(|c| c.0).map_err(py_err)
    }

    /// Parameter report as JSON.
    #[pyo3(signature = (engine = "auto"))]
    fn report_json(&self, py: Python<'_>, engine: &str) -> PyResult<String> {
        let opts = self::engine(engine)?;
        let gc = &self.0;
        let r = py.detach(|| gc.report(&opts)).map_err(py_err)?;
        to_json(&r)
    }

    /// Certificate for a nonzero codeword as JSON.
    fn certify_json(&self, assignment: Vec<u32>) -> PyResult<String> {
        let cert = certify(&self.0, &EdgeAssignment(assignment)).map_err(py_err)?;
        to_json(&cert)
    }

    fn __repr__(&self) -> String {
        format!(
            "GraphCode(ell={}, m={}, n={}, N={})",
            self.0.ell(),
            self.0.m(),
            self.0.n(),
            self.0.len()
        )
    }
}

/// Report for a built-in instance (`k777` or `k333`) with claim checks, as JSON.
#[pyfunction]
fn example_report(py: Python<'_>, name: &str) -> PyResult<String> {
    let ex = example(name).map_err(py_err)?;
    let r = py
        .detach(|| ex.report(&SearchOptions::default()))
        .map_err(py_err)?;
    to_json(&r)
}

#[pymodule]
fn ggcode(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLinearCode>()?;
    m.add_class::<PyGraphCode>()?;
    m.add_function(wrap_pyfunction!(example_report, m)?)?;
    Ok(())
}
