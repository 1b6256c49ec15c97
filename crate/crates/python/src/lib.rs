//! Python bindings. Numbers cross the boundary as `fractions.Fraction`;
//! inputs may also be `int`, `float` (read from its shortest repr) or a
//! decimal / `"p/q"` string.

use finmm_core::io::Certificate;
use finmm_core::moduli::{canonical_form as canonical, mm_coordinates, MetricVector};
use finmm_core::number::parse_real;
use finmm_core::{
    box_exact_with, build_comb, comb_witness as witness, distortion as dis, gh_exact_with, prokhorov as prok,
    uniform_lift as lift, BoxOptions, CombParams, Error, ExtReal, FiniteMMSpace, FiniteMetricSpace, GhOptions, Real,
    Relation, SpaceDoc,
};
use pyo3::create_exception;
use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyFloat, PyString};

create_exception!(finmm, GuardExceeded, PyValueError, "The instance is too large for exhaustive search.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::GuardExceeded { .. } => GuardExceeded::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

struct Num(Real);

impl<'a, 'py> FromPyObject<'a, 'py> for Num {
    type Error = PyErr;

    fn extract(obj: Borrowed<'a, 'py, PyAny>) -> PyResult<Self> {
        if let Ok(s) = obj.cast::<PyString>() {
            return parse_real(s.to_str()?).map(Num).map_err(to_py);
        }
        if obj.is_instance_of::<PyFloat>() {
            let text = obj.repr()?.to_string();
            return parse_real(&text).map(Num).map_err(|_| PyValueError::new_err(format!("not a finite number: {text}")));
        }
        obj.extract::<Real>()
            .map(Num)
            .map_err(|_| PyTypeError::new_err("expected a Fraction, int, float or numeric string"))
    }
}

fn reals(v: Vec<Num>) -> Vec<Real> {
    v.into_iter().map(|n| n.0).collect()
}

fn matrix(v: Vec<Vec<Num>>) -> Vec<Vec<Real>> {
    v.into_iter().map(reals).collect()
}

fn ext(py: Python<'_>, v: ExtReal) -> PyResult<Py<PyAny>> {
    match v {
        ExtReal::Finite(v) => Ok(v.into_pyobject(py)?.unbind()),
        ExtReal::Infinity => Ok(PyFloat::new(py, f64::INFINITY).into_any().unbind()),
    }
}

/// A finite metric space given by its distance matrix.
#[pyclass(name = "MetricSpace", module = "finmm", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMetricSpace {
    inner: FiniteMetricSpace,
}

#[pymethods]
impl PyMetricSpace {
    #[new]
    #[pyo3(signature = (dist, labels=None))]
    fn new(dist: Vec<Vec<Num>>, labels: Option<Vec<String>>) -> PyResult<Self> {
        let dist = matrix(dist);
        let inner = match labels {
            Some(l) => FiniteMetricSpace::new(l, dist),
            None => FiniteMetricSpace::from_matrix(dist),
        };
        inner.map(|inner| PyMetricSpace { inner }).map_err(to_py)
    }

    /// Parse a space file; any `mass` field is ignored.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        let inner = SpaceDoc::parse(text).and_then(|d| d.to_metric()).map_err(to_py)?;
        Ok(PyMetricSpace { inner })
    }

    fn to_text(&self) -> String {
        SpaceDoc::from_metric(&self.inner).to_text()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    #[getter]
    fn dist(&self) -> Vec<Vec<Real>> {
        self.inner.matrix().to_vec()
    }

    /// Smallest nonzero distance; `inf` for a single point.
    fn separation(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        ext(py, self.inner.separation())
    }

    fn diameter(&self) -> Real {
        self.inner.diameter()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("MetricSpace(<{} points>)", self.inner.len())
    }
}

/// A finite metric space with a probability measure charging every point.
#[pyclass(name = "MMSpace", module = "finmm", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMMSpace {
    inner: FiniteMMSpace,
}

#[pymethods]
impl PyMMSpace {
    /// Masses must sum to 1 exactly; use `from_text` for tolerant ingestion.
    #[new]
    #[pyo3(signature = (dist, mass, labels=None))]
    fn new(dist: Vec<Vec<Num>>, mass: Vec<Num>, labels: Option<Vec<String>>) -> PyResult<Self> {
        let space = PyMetricSpace::new(dist, labels)?.inner;
        let inner = FiniteMMSpace::new(space, reals(mass)).map_err(to_py)?;
        Ok(PyMMSpace { inner })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        let inner = SpaceDoc::parse(text).and_then(|d| d.to_mm()).map_err(to_py)?;
        Ok(PyMMSpace { inner })
    }

    fn to_text(&self) -> String {
        SpaceDoc::from_mm(&self.inner).to_text()
    }

    #[getter]
    fn space(&self) -> PyMetricSpace {
        PyMetricSpace { inner: self.inner.space().clone() }
    }

    #[getter]
    fn mass(&self) -> Vec<Real> {
        self.inner.mass().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("MMSpace(<{} points>)", self.inner.len())
    }
}

type Pairs = Vec<(usize, usize)>;

/// Gromov-Hausdorff distance and a minimizing correspondence.
#[pyfunction]
#[pyo3(signature = (x, y, guard_n=None))]
fn gh(py: Python<'_>, x: &PyMetricSpace, y: &PyMetricSpace, guard_n: Option<usize>) -> PyResult<(Real, Pairs)> {
    let mut opts = GhOptions::default();
    if let Some(n) = guard_n {
        opts.guard_n = n;
    }
    let res = py.detach(|| gh_exact_with(&x.inner, &y.inner, &opts)).map_err(to_py)?;
    Ok((res.value, res.witness.to_vec()))
}

/// Box distance with a minimizing coupling and relation.
#[pyfunction(name = "box")]
#[pyo3(signature = (x, y, guard_cells=None))]
fn box_distance(
    py: Python<'_>,
    x: &PyMMSpace,
    y: &PyMMSpace,
    guard_cells: Option<usize>,
) -> PyResult<(Real, Vec<Vec<Real>>, Pairs)> {
    let mut opts = BoxOptions::default();
    if let Some(n) = guard_cells {
        opts.guard_cells = n;
    }
    let res = py.detach(|| box_exact_with(&x.inner, &y.inner, &opts)).map_err(to_py)?;
    Ok((res.value, res.coupling.matrix().to_vec(), res.relation.to_vec()))
}

/// Prokhorov distance between two measures on `z`.
#[pyfunction]
fn prokhorov(z: &PyMetricSpace, mu: Vec<Num>, nu: Vec<Num>) -> PyResult<Real> {
    prok(&reals(mu), &reals(nu), &z.inner).map_err(to_py)
}

/// Distortion of a relation given as index pairs.
#[pyfunction]
fn distortion(x: &PyMetricSpace, y: &PyMetricSpace, relation: Pairs) -> PyResult<Real> {
    dis(&Relation::new(relation), &x.inner, &y.inner).map_err(to_py)
}

/// Canonical edge vector (pairs `i < j` in lexicographic order) and, for a
/// metric measure space, the matching weight vector.
#[pyfunction]
fn canonical_form(x: &Bound<'_, PyAny>) -> PyResult<(Vec<Real>, Option<Vec<Real>>)> {
    let form = if let Ok(m) = x.cast::<PyMMSpace>() {
        let (r, s) = mm_coordinates(&m.get().inner);
        canonical(&r, Some(&s))
    } else if let Ok(m) = x.cast::<PyMetricSpace>() {
        canonical(&MetricVector::from_space(&m.get().inner), None)
    } else {
        return Err(PyTypeError::new_err("expected MetricSpace or MMSpace"));
    }
    .map_err(to_py)?;
    Ok((form.r.values().to_vec(), form.s.map(|s| s.values().to_vec())))
}

#[pyfunction]
fn uniform_lift(x: &PyMetricSpace) -> PyMMSpace {
    PyMMSpace { inner: lift(&x.inner) }
}

/// Discretized comb with tooth parameters `t` and `mesh` samples per tooth.
#[pyfunction]
fn comb(t: Vec<Num>, mesh: usize) -> PyResult<PyMMSpace> {
    let params = CombParams::new(reals(t), mesh).map_err(to_py)?;
    Ok(PyMMSpace { inner: build_comb(&params) })
}

/// Block-matching certificate between `comb(s, mesh)` and `comb(t, mesh)`.
/// Returns `(certified_value, distortion, bound, certificate_text)`.
#[pyfunction]
#[pyo3(signature = (s, t, mesh, eps=None))]
fn comb_witness(s: Vec<Num>, t: Vec<Num>, mesh: usize, eps: Option<Num>) -> PyResult<(Real, Real, Real, String)> {
    let w = witness(&reals(s), &reals(t), mesh, eps.as_ref().map(|e| &e.0)).map_err(to_py)?;
    let cert = Certificate { pi: w.coupling.clone(), s: w.relation.clone(), claimed_value: w.certified_value() };
    Ok((w.certified_value(), w.distortion, w.eps_bound, cert.to_text()))
}

/// Recompute a certificate. Returns `(holds, recomputed_value)`.
#[pyfunction]
fn check_certificate(x: &PyMMSpace, y: &PyMMSpace, text: &str) -> PyResult<(bool, Real)> {
    let check = Certificate::parse(text).and_then(|c| c.check(&x.inner, &y.inner)).map_err(to_py)?;
    Ok((check.holds(), check.recomputed))
}

#[pymodule]
fn finmm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMetricSpace>()?;
    m.add_class::<PyMMSpace>()?;
    m.add("GuardExceeded", m.py().get_type::<GuardExceeded>())?;
    m.add_function(wrap_pyfunction!(gh, m)?)?;
    m.add_function(wrap_pyfunction!(box_distance, m)?)?;
    m.add_function(wrap_pyfunction!(prokhorov, m)?)?;
    m.add_function(wrap_pyfunction!(distortion, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_form, m)?)?;
    m.add_function(wrap_pyfunction!(uniform_lift, m)?)?;
    m.add_function(wrap_pyfunction!(comb, m)?)?;
    m.add_function(wrap_pyfunction!(comb_witness, m)?)?;
    m.add_function(wrap_pyfunction!(check_certificate, m)?)?;
    Ok(())
}
