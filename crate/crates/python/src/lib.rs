//! Python bindings: polyhedra, affine maps, the kernel operations, universal
//! extensions of parsed problems and the command runner.
//!
//! Rationals cross the boundary as strings (`"3/2"`); anything whose `str()`
//! parses is accepted on the way in, so ints and `fractions.Fraction` work.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use tropext::cli::{self, Command};
use tropext::error::Error;
use tropext::extension_ops::check_open_universality;
use tropext::io::parse_problem;
use tropext::kernel::{self, format_rat, parse_rat, Constraint, Int, Rat};
use tropext::universal::{build_pu, embedding_report, UniversalExtension as CoreUniversal};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(format!("{}: {e}", e.code()))
}

fn rat_of(x: &Bound<'_, PyAny>) -> PyResult<Rat> {
    parse_rat(&x.str()?.to_string()).map_err(py_err)
}

fn int_of(x: &Bound<'_, PyAny>) -> PyResult<Int> {
    x.str()?
        .to_string()
        .parse()
        .map_err(|_| PyValueError::new_err(format!("not an integer: {x}")))
}

fn rats_of(v: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rat>> {
    v.iter().map(rat_of).collect()
}

fn strs(x: &[Rat]) -> Vec<String> {
    x.iter().map(format_rat).collect()
}

fn ints(x: &[Int]) -> Vec<String> {
    x.iter().map(Int::to_string).collect()
}

type RawConstraint<'py> = (Vec<Bound<'py, PyAny>>, Bound<'py, PyAny>);

fn constraints_of(rows: Vec<RawConstraint<'_>>) -> PyResult<Vec<Constraint>> {
    rows.into_iter()
        .map(|(normal, offset)| {
            let normal = normal.iter().map(int_of).collect::<PyResult<_>>()?;
            Ok(Constraint::new(normal, rat_of(&offset)?))
        })
        .collect()
}

fn constraints_out(cs: &[Constraint]) -> Vec<(Vec<String>, String)> {
    cs.iter().map(|c| (ints(&c.normal), format_rat(&c.offset))).collect()
}

/// `{x : a·x ≥ b for each inequality, a·x = b for each equality}`.
#[pyclass(name = "Polyhedron", module = "pytropext", frozen)]
#[derive(Clone)]
struct PyPolyhedron {
    inner: kernel::Polyhedron,
}

#[pymethods]
impl PyPolyhedron {
    #[new]
    #[pyo3(signature = (dim, inequalities, equalities=Vec::new()))]
    fn new(dim: usize, inequalities: Vec<RawConstraint<'_>>, equalities: Vec<RawConstraint<'_>>) -> PyResult<Self> {
        let inner =
            kernel::Polyhedron::new(dim, constraints_of(inequalities)?, constraints_of(equalities)?).map_err(py_err)?;
        Ok(PyPolyhedron { inner })
    }

    #[staticmethod]
    fn orthant(n: usize) -> Self {
        PyPolyhedron { inner: kernel::Polyhedron::orthant(n) }
    }

    #[staticmethod]
    fn point(x: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        Ok(PyPolyhedron { inner: kernel::Polyhedron::point(&rats_of(&x)?) })
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.inner.ambient_dim()
    }

    /// Dimension of the set, `-1` when empty.
    fn dimension(&self) -> i64 {
        self.inner.dimension()
    }

    fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    fn contains(&self, x: Vec<Bound<'_, PyAny>>) -> PyResult<bool> {
        let x = rats_of(&x)?;
        if x.len() != self.inner.ambient_dim() {
            return Err(py_err(tropext::error::dims("point", self.inner.ambient_dim(), x.len())));
        }
        Ok(self.inner.contains(&x))
    }

    fn canonical(&self) -> Self {
        PyPolyhedron { inner: self.inner.canonical() }
    }

    fn same_set(&self, other: &PyPolyhedron) -> bool {
        self.inner.same_set(&other.inner)
    }

    fn inequalities(&self) -> Vec<(Vec<String>, String)> {
        constraints_out(self.inner.inequalities())
    }

    fn equalities(&self) -> Vec<(Vec<String>, String)> {
        constraints_out(self.inner.equalities())
    }

    fn vertices(&self) -> Vec<Vec<String>> {
        self.inner.vrep().vertices.iter().map(|v| strs(v)).collect()
    }

    fn rays(&self) -> Vec<Vec<String>> {
        self.inner.vrep().rays.iter().map(|r| ints(r)).collect()
    }

    fn lines(&self) -> Vec<Vec<String>> {
        self.inner.vrep().lines.iter().map(|l| ints(l)).collect()
    }

    fn __eq__(&self, other: &PyPolyhedron) -> bool {
        self.inner.canonical() == other.inner.canonical()
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

/// `x ↦ Lx + t` with integer `L` and rational `t`.
#[pyclass(name = "AffineMap", module = "pytropext", frozen)]
#[derive(Clone)]
struct PyAffineMap {
    inner: kernel::AffineMap,
}

#[pymethods]
impl PyAffineMap {
    #[new]
    fn new(source_dim: usize, linear: Vec<Vec<Bound<'_, PyAny>>>, translate: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let linear = linear
            .iter()
            .map(|row| row.iter().map(int_of).collect::<PyResult<Vec<_>>>())
            .collect::<PyResult<Vec<_>>>()?;
        let inner = kernel::AffineMap::new(source_dim, linear, rats_of(&translate)?).map_err(py_err)?;
        Ok(PyAffineMap { inner })
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        PyAffineMap { inner: kernel::AffineMap::identity(n) }
    }

    #[getter]
    fn source_dim(&self) -> usize {
        self.inner.source_dim()
    }

    #[getter]
    fn target_dim(&self) -> usize {
        self.inner.target_dim()
    }

    #[getter]
    fn linear(&self) -> Vec<Vec<String>> {
        self.inner.linear().iter().map(|r| ints(r)).collect()
    }

    #[getter]
    fn translate(&self) -> Vec<String> {
        strs(self.inner.translate())
    }

    fn apply(&self, x: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<String>> {
        let x = rats_of(&x)?;
        if x.len() != self.inner.source_dim() {
            return Err(py_err(tropext::error::dims("point", self.inner.source_dim(), x.len())));
        }
        Ok(strs(&self.inner.apply(&x)))
    }

    /// `self ∘ inner`.
    fn compose(&self, inner: &PyAffineMap) -> PyResult<Self> {
        Ok(PyAffineMap { inner: self.inner.compose(&inner.inner).map_err(py_err)? })
    }

    fn __eq__(&self, other: &PyAffineMap) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

#[pyfunction]
fn image(p: &PyPolyhedron, a: &PyAffineMap) -> PyResult<PyPolyhedron> {
    Ok(PyPolyhedron { inner: kernel::image(&p.inner, &a.inner).map_err(py_err)? })
}

#[pyfunction]
fn preimage(p: &PyPolyhedron, a: &PyAffineMap) -> PyResult<PyPolyhedron> {
    Ok(PyPolyhedron { inner: kernel::preimage(&p.inner, &a.inner).map_err(py_err)? })
}

#[pyfunction]
fn equalizer(p: &PyPolyhedron, a1: &PyAffineMap, a2: &PyAffineMap) -> PyResult<PyPolyhedron> {
    Ok(PyPolyhedron { inner: kernel::equalizer(&p.inner, &a1.inner, &a2.inner).map_err(py_err)? })
}

#[pyfunction]
fn fixed_locus(p: &PyPolyhedron, endos: Vec<PyRef<'_, PyAffineMap>>) -> PyResult<PyPolyhedron> {
    let endos: Vec<kernel::AffineMap> = endos.iter().map(|e| e.inner.clone()).collect();
    Ok(PyPolyhedron { inner: kernel::fixed_locus(&p.inner, &endos).map_err(py_err)? })
}

/// The universal extension of the curve in a problem file.
#[pyclass(name = "UniversalExtension", module = "pytropext", frozen)]
struct PyUniversal {
    inner: CoreUniversal,
}

#[pymethods]
impl PyUniversal {
    /// Builds from the text of a problem file.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let p = parse_problem(text).map_err(py_err)?;
        let report = tropext::curve::validate_curve_type(&p.curve);
        if let Some(f) = report.failures().next() {
            return Err(PyValueError::new_err(format!("INVALID_CURVE: {} [{}] {}", f.name, f.subject, f.detail)));
        }
        Ok(PyUniversal { inner: build_pu(&p.curve).map_err(py_err)? })
    }

    #[getter]
    fn pu(&self) -> PyPolyhedron {
        PyPolyhedron { inner: self.inner.pu.clone() }
    }

    #[getter]
    fn basepoint(&self) -> Vec<String> {
        strs(&self.inner.basepoint)
    }

    /// Edge id → length map `ρ_e`.
    #[getter]
    fn rho(&self) -> BTreeMap<String, PyAffineMap> {
        self.inner
            .curve
            .edges
            .iter()
            .zip(&self.inner.rho)
            .map(|(e, r)| (e.id.clone(), PyAffineMap { inner: r.clone() }))
            .collect()
    }

    fn cutting_equations(&self) -> Vec<String> {
        self.inner.cutting_equations().iter().map(|c| c.describe("=")).collect()
    }

    /// `(name, subject, passed, detail)` for each check.
    fn embedding_report(&self) -> Vec<(String, String, bool, String)> {
        embedding_report(&self.inner)
            .checks
            .into_iter()
            .map(|c| (c.name, c.subject, c.passed, c.detail))
            .collect()
    }

    /// The face where the given edges have length zero, and whether the
    /// contracted curve's `P_u` maps isomorphically onto it.
    fn face_check(&self, smooth_edges: Vec<String>) -> PyResult<(PyPolyhedron, bool)> {
        let c = &self.inner.curve;
        let s = smooth_edges
            .iter()
            .map(|id| c.edge_index(id).ok_or_else(|| py_err(Error::UnknownId(format!("edge {id:?}")))))
            .collect::<PyResult<Vec<_>>>()?;
        let (fr, r) = check_open_universality(&self.inner, &s, &BTreeMap::new()).map_err(py_err)?;
        Ok((PyPolyhedron { inner: fr.face }, r.passed()))
    }
}

/// Runs a CLI command on the text of a problem file; returns the exit code
/// and the solution text.
#[pyfunction]
#[pyo3(signature = (command, text, smooth_edges=None))]
fn run(command: &str, text: &str, smooth_edges: Option<Vec<String>>) -> PyResult<(i32, String)> {
    let c: Command = command.parse().map_err(PyValueError::new_err)?;
    if c == Command::Selftest {
        return Err(PyValueError::new_err("selftest takes no problem file"));
    }
    let out = cli::run(c, text.as_bytes(), smooth_edges.as_deref());
    Ok((out.code, out.output))
}

#[pymodule]
fn pytropext(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolyhedron>()?;
    m.add_class::<PyAffineMap>()?;
    m.add_class::<PyUniversal>()?;
    m.add_function(wrap_pyfunction!(image, m)?)?;
    m.add_function(wrap_pyfunction!(preimage, m)?)?;
    m.add_function(wrap_pyfunction!(equalizer, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_locus, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
