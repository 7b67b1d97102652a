//! Python bindings, importable as `pyturan`.

use std::time::Duration;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict};

use turan::constructions;
use turan::detectors::{self, PatternSpec};
use turan::formulas::{self, FormulaResult};
use turan::graph::{self, Graph};
use turan::io;
use turan::oracle::{self, SearchOptions};
use turan::treelab;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Simple undirected graph on vertices `0..n`.
#[pyclass(name = "Graph", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyGraph {
    inner: Graph,
}

impl From<Graph> for PyGraph {
    fn from(inner: Graph) -> Self {
        PyGraph { inner }
    }
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges = Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Graph::from_edges(n, &edges).map(Into::into).map_err(value_err)
    }

    #[staticmethod]
    fn from_graph6(s: &str) -> PyResult<Self> {
        io::from_graph6(s.trim().as_bytes()).map(Into::into).map_err(value_err)
    }

    #[staticmethod]
    fn from_edgelist(s: &str) -> PyResult<Self> {
        io::from_edgelist(s.as_bytes()).map(Into::into).map_err(value_err)
    }

    #[staticmethod]
    fn complete(t: usize) -> PyResult<Self> {
        graph::complete(t).map(Into::into).map_err(value_err)
    }

    #[staticmethod]
    fn path(l: usize) -> PyResult<Self> {
        graph::path(l).map(Into::into).map_err(value_err)
    }

    #[staticmethod]
    fn empty(t: usize) -> PyResult<Self> {
        graph::empty(t).map(Into::into).map_err(value_err)
    }

    fn to_graph6(&self) -> String {
        io::to_graph6(&self.inner)
    }

    fn to_edgelist(&self) -> String {
        io::to_edgelist(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn degree(&self, v: usize) -> PyResult<usize> {
        if v >= self.inner.n() {
            return Err(value_err(format!("vertex {v} out of range")));
        }
        Ok(self.inner.degree(v))
    }

    fn join(&self, other: &PyGraph) -> PyResult<Self> {
        graph::join(&self.inner, &other.inner).map(Into::into).map_err(value_err)
    }

    fn union(&self, other: &PyGraph) -> PyResult<Self> {
        graph::disjoint_union(&self.inner, &other.inner).map(Into::into).map_err(value_err)
    }

    fn canonical_code<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, turan::canonical_code(&self.inner).as_bytes())
    }

    fn is_isomorphic(&self, other: &PyGraph) -> bool {
        turan::isomorphic(&self.inner, &other.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={}, graph6={:?})", self.inner.n(), self.inner.m(), io::to_graph6(&self.inner))
    }
}

/// Forbidden subgraph: `k*Pl`, `Pl`, or a forest.
#[pyclass(name = "Pattern", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyPattern {
    inner: PatternSpec,
}

#[pymethods]
impl PyPattern {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        spec.parse().map(|inner| PyPattern { inner }).map_err(value_err)
    }

    #[staticmethod]
    fn forest(h: &PyGraph) -> PyResult<Self> {
        PatternSpec::forest(h.inner.clone()).map(|inner| PyPattern { inner }).map_err(value_err)
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    fn to_graph(&self) -> PyResult<PyGraph> {
        self.inner.to_graph().map(Into::into).map_err(value_err)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Pattern({:?})", self.inner.to_string())
    }
}

fn formula_dict<'py>(py: Python<'py>, r: &FormulaResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("value", r.value)?;
    d.set_item("exact_rational", r.exact_rational.to_string())?;
    d.set_item(
        "kind",
        match r.kind {
            formulas::BoundKind::Exact => "exact",
            formulas::BoundKind::Upper => "upper",
            formulas::BoundKind::Lower => "lower",
        },
    )?;
    d.set_item("in_proved_range", r.in_proved_range)?;
    d.set_item("conjectured", r.conjectured)?;
    d.set_item("conditional_on_erdos_sos", r.conditional_on_erdos_sos)?;
    d.set_item("threshold", r.threshold.map(|t| t.to_string()))?;
    d.set_item("citation", r.citation)?;
    Ok(d)
}

#[pyfunction]
fn ex_k_p3(py: Python<'_>, n: u64, k: u64) -> PyResult<Bound<'_, PyDict>> {
    formula_dict(py, &formulas::ex_k_p3(n, k).map_err(value_err)?)
}

#[pyfunction]
fn ex_k_pl(py: Python<'_>, n: u64, k: u64, l: u64) -> PyResult<Bound<'_, PyDict>> {
    formula_dict(py, &formulas::ex_k_pl(n, k, l).map_err(value_err)?)
}

#[pyfunction]
fn ex_forest<'py>(py: Python<'py>, n: u64, h: &PyGraph) -> PyResult<Bound<'py, PyDict>> {
    formula_dict(py, &formulas::ex_equibipartite_forest(n, &h.inner).map_err(value_err)?)
}

#[pyfunction]
fn erdos_gallai_bound(py: Python<'_>, n: u64, l: u64) -> PyResult<Bound<'_, PyDict>> {
    formula_dict(py, &formulas::erdos_gallai_bound(n, l).map_err(value_err)?)
}

#[pyfunction]
fn gorgol_lower_p3(py: Python<'_>, n: u64, k: u64) -> PyResult<Bound<'_, PyDict>> {
    formula_dict(py, &formulas::gorgol_lower_p3(n, k).map_err(value_err)?)
}

#[pyfunction]
fn p3_extremal(n: usize, k: usize) -> PyResult<PyGraph> {
    constructions::p3_extremal(n, k).map(Into::into).map_err(value_err)
}

#[pyfunction]
fn pl_extremal(n: usize, k: usize, l: usize) -> PyResult<PyGraph> {
    constructions::pl_extremal(n, k, l).map(Into::into).map_err(value_err)
}

#[pyfunction]
fn erdos_gallai_extremal(n: usize, l: usize) -> PyResult<PyGraph> {
    constructions::erdos_gallai_extremal(n, l).map(Into::into).map_err(value_err)
}

#[pyfunction]
fn forest_extremal(n: usize, h: &PyGraph) -> PyResult<PyGraph> {
    constructions::forest_extremal(n, &h.inner).map(Into::into).map_err(value_err)
}

/// Vertex-disjoint copies found in `g` as a list of vertex lists, or `None`.
#[pyfunction]
fn contains_pattern(g: &PyGraph, pattern: &PyPattern) -> Option<Vec<Vec<usize>>> {
    detectors::contains_pattern(&g.inner, &pattern.inner).map(|w| w.parts)
}

/// `(vertex count, path)` of a longest path.
#[pyfunction]
fn longest_path(g: &PyGraph) -> (usize, Vec<usize>) {
    detectors::longest_path(&g.inner)
}

#[pyfunction]
fn has_perfect_matching(f: &PyGraph) -> (bool, Option<Vec<(usize, usize)>>) {
    treelab::has_perfect_matching(&f.inner)
}

/// `(small_class, large_class, small_edge)`.
type Partition = (Vec<usize>, Vec<usize>, (usize, usize));

/// Partition certificate for a tree without a perfect matching.
#[pyfunction]
fn nopm_partition(t: &PyGraph) -> PyResult<Partition> {
    let c = treelab::nopm_partition(&t.inner).map_err(value_err)?;
    Ok((c.small_class, c.large_class, c.small_edge))
}

#[pyfunction]
#[pyo3(signature = (n, pattern, max_nodes = None, max_seconds = None, threads = 0))]
fn exact_ex<'py>(
    py: Python<'py>,
    n: usize,
    pattern: &PyPattern,
    max_nodes: Option<u64>,
    max_seconds: Option<f64>,
    threads: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let opts = SearchOptions {
        max_nodes,
        max_time: max_seconds.map(Duration::from_secs_f64),
        threads,
        ..SearchOptions::default()
    };
    let spec = pattern.inner.clone();
    let report = py
        .detach(move || oracle::exact_ex(n, &spec, &opts))
        .map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("n", report.n)?;
    d.set_item("pattern", report.pattern.to_string())?;
    d.set_item("max_edges", report.max_edges)?;
    let witnesses: Vec<PyGraph> = report.witness_graphs().into_iter().map(Into::into).collect();
    d.set_item("witnesses", witnesses)?;
    d.set_item("nodes_explored", report.nodes_explored)?;
    d.set_item("wall_time", report.wall_time.as_secs_f64())?;
    d.set_item("complete", report.complete)?;
    Ok(d)
}

#[pymodule]
fn pyturan(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyPattern>()?;
    m.add_function(wrap_pyfunction!(ex_k_p3, m)?)?;
    m.add_function(wrap_pyfunction!(ex_k_pl, m)?)?;
    m.add_function(wrap_pyfunction!(ex_forest, m)?)?;
    m.add_function(wrap_pyfunction!(erdos_gallai_bound, m)?)?;
    m.add_function(wrap_pyfunction!(gorgol_lower_p3, m)?)?;
    m.add_function(wrap_pyfunction!(p3_extremal, m)?)?;
    m.add_function(wrap_pyfunction!(pl_extremal, m)?)?;
    m.add_function(wrap_pyfunction!(erdos_gallai_extremal, m)?)?;
    m.add_function(wrap_pyfunction!(forest_extremal, m)?)?;
    m.add_function(wrap_pyfunction!(contains_pattern, m)?)?;
    m.add_function(wrap_pyfunction!(longest_path, m)?)?;
    m.add_function(wrap_pyfunction!(has_perfect_matching, m)?)?;
    m.add_function(wrap_pyfunction!(nopm_partition, m)?)?;
    m.add_function(wrap_pyfunction!(exact_ex, m)?)?;
    Ok(())
}
