//! Python module `sphlab_py`: test functions, averaging operators, exponent
//! regions, the interpolation table, check suites and sweeps.
//!
//! Structured results come back as plain dicts and lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;
use sphlab::funcspace::{Exponent, Field as FieldTrait, Gaussian, RadialProfile, Q};
use sphlab::operators::{self, RExponent, TimeGrid};
use sphlab::quad::{sphere_rule, Measure, RotationAngle, SphereRule};
use sphlab::regions::{self, ExponentPoint, TheoremId};
use sphlab::sweep::{self, WeakTypePlan};

fn err(e: sphlab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn exponent(s: &str) -> PyResult<Exponent> {
    s.parse().map_err(err)
}

fn rational(s: &str) -> PyResult<Q> {
    s.parse().map_err(|e| PyValueError::new_err(format!("{s:?}: {e}")))
}

/// Round-trips through JSON so Python gets dicts, lists and strings.
fn to_py<'py>(py: Python<'py>, v: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

enum Inner {
    Gaussian(Gaussian),
    Radial(RadialProfile),
}

/// A test function on `R^d`: a Gaussian, a ball or an annulus indicator.
#[pyclass(name = "Field", frozen)]
pub struct PyField(Inner);

impl PyField {
    fn field(&self) -> &dyn FieldTrait {
        match &self.0 {
            Inner::Gaussian(g) => g,
            Inner::Radial(r) => r,
        }
    }
}

#[pymethods]
impl PyField {
    /// `amp * exp(-a |x - center|^2)`.
    #[staticmethod]
    #[pyo3(signature = (center, a, amp = 1.0))]
    fn gaussian(center: Vec<f64>, a: f64, amp: f64) -> PyResult<Self> {
        if center.is_empty() || !(a > 0.0) {
            return Err(PyValueError::new_err("need a non-empty center and a > 0"));
        }
        Ok(PyField(Inner::Gaussian(Gaussian { center, a, amp })))
    }

    /// Indicator of the ball of the given radius about 0 in `R^d`.
    #[staticmethod]
    fn ball(d: usize, radius: f64) -> PyResult<Self> {
        Ok(PyField(Inner::Radial(RadialProfile::ball(d, radius).map_err(err)?)))
    }

    /// Indicator of `inner <= |x| <= outer` in `R^d`.
    #[staticmethod]
    fn annulus(d: usize, inner: f64, outer: f64) -> PyResult<Self> {
        Ok(PyField(Inner::Radial(RadialProfile::annulus(d, inner, outer).map_err(err)?)))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.field().dim()
    }

    fn __call__(&self, x: Vec<f64>) -> PyResult<f64> {
        if x.len() != self.dim() {
            return Err(PyValueError::new_err(format!("point must have length {}", self.dim())));
        }
        Ok(self.field().eval(&x))
    }

    fn __repr__(&self) -> String {
        match &self.0 {
            Inner::Gaussian(g) => format!("Field.gaussian(center={:?}, a={}, amp={})", g.center, g.a, g.amp),
            Inner::Radial(r) => format!("Field(radial, d={}, edges={:?})", r.dimension(), r.edges()),
        }
    }
}

fn rule(d: usize, n: usize, mode: Measure) -> PyResult<SphereRule> {
    sphere_rule(d, n, mode).map_err(err)
}

fn angle(theta: f64) -> PyResult<RotationAngle> {
    RotationAngle::new(theta).map_err(err)
}

/// Normalized spherical average `A_t f(x)` with an `n`-point product rule.
#[pyfunction]
#[pyo3(signature = (f, x, t, n = 64))]
fn spherical_average(f: &PyField, x: Vec<f64>, t: f64, n: usize) -> PyResult<f64> {
    operators::spherical_average(f.field(), &x, t, &rule(f.dim(), n, Measure::Normalized)?).map_err(err)
}

/// `max_t A_t f(x)` over `t` in `[1, 2]`, sampled `per_octave` times.
#[pyfunction]
#[pyo3(signature = (f, x, n = 64, per_octave = 64))]
fn maximal_average(f: &PyField, x: Vec<f64>, n: usize, per_octave: usize) -> PyResult<f64> {
    let grid = TimeGrid::local(per_octave).map_err(err)?;
    operators::maximal_average(f.field(), &x, &grid, &rule(f.dim(), n, Measure::Normalized)?).map_err(err)
}

/// `(int_1^2 |A_t f(x)|^r dt)^{1/r}`; `r` is a string such as `"3/2"` or `"inf"`.
#[pyfunction]
#[pyo3(signature = (f, x, r, n = 64, k = 16))]
fn ar_value(f: &PyField, x: Vec<f64>, r: &str, n: usize, k: usize) -> PyResult<f64> {
    let r = RExponent::new(exponent(r)?).map_err(err)?;
    operators::ar_value(f.field(), &x, r, &rule(f.dim(), n, Measure::Normalized)?, k).map_err(err)
}

/// Normalized bilinear average over `S^{2d-1}`, by slicing.
#[pyfunction]
#[pyo3(signature = (f, g, x, t, n = 64))]
fn bilinear_average(f: &PyField, g: &PyField, x: Vec<f64>, t: f64, n: usize) -> PyResult<f64> {
    operators::bilinear_average_sliced(f.field(), g.field(), &x, t, &rule(f.dim(), n, Measure::Raw)?, n, Measure::Normalized).map_err(err)
}

/// Planar `𝒜^θ_t(f, g)(x)`: average of `f(x - ty) g(x - tΘy)` over the circle.
#[pyfunction]
#[pyo3(signature = (f, g, x, t, theta, n = 64))]
fn rotated_bilinear(f: &PyField, g: &PyField, x: Vec<f64>, t: f64, theta: f64, n: usize) -> PyResult<f64> {
    operators::rotated_bilinear(f.field(), g.field(), &x, t, angle(theta)?, &rule(2, n, Measure::Normalized)?).map_err(err)
}

/// Planar `𝒜^θ_{|x|}(f, g)(x)`.
#[pyfunction]
#[pyo3(signature = (f, g, x, theta, n = 64))]
fn linearized_bilinear(f: &PyField, g: &PyField, x: Vec<f64>, theta: f64, n: usize) -> PyResult<f64> {
    operators::linearized_bilinear(f.field(), g.field(), &x, angle(theta)?, &rule(2, n, Measure::Normalized)?).map_err(err)
}

/// Constant in the pointwise domination of the bilinear `L^r`-in-scale
/// operator by linear ones.
#[pyfunction]
fn domination_constant(d: usize, r: &str) -> PyResult<f64> {
    Ok(operators::domination_constant(d, RExponent::new(exponent(r)?).map_err(err)?))
}

fn point(d: u32, r: Option<&str>, exponents: Option<Vec<String>>, coords: Option<Vec<String>>) -> PyResult<ExponentPoint> {
    let r = r.map(exponent).transpose()?;
    match (exponents, coords) {
        (Some(e), None) => Ok(ExponentPoint::from_exponents(&e.iter().map(|s| exponent(s)).collect::<PyResult<Vec<_>>>()?, d, r)),
        (None, Some(c)) => Ok(ExponentPoint::new(c.iter().map(|s| rational(s)).collect::<PyResult<Vec<_>>>()?, d, r)),
        _ => Err(PyValueError::new_err("give exactly one of `exponents` or `coords`")),
    }
}

/// Verdict and citations for a point, given as exponents (`["4/3", "4"]`)
/// or reciprocal coordinates (`coords=["3/4", "1/4"]`).
#[pyfunction]
#[pyo3(signature = (thm, d, exponents = None, coords = None, r = None))]
fn classify<'py>(py: Python<'py>, thm: &str, d: u32, exponents: Option<Vec<String>>, coords: Option<Vec<String>>, r: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
    let thm: TheoremId = thm.parse().map_err(err)?;
    let pt = point(d, r, exponents, coords)?;
    to_py(py, &regions::classify(&pt, thm).map_err(err)?)
}

/// Necessary conditions evaluated at a point.
#[pyfunction]
#[pyo3(signature = (thm, d, exponents = None, coords = None, r = None))]
fn necessary_gap<'py>(py: Python<'py>, thm: &str, d: u32, exponents: Option<Vec<String>>, coords: Option<Vec<String>>, r: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
    let thm: TheoremId = thm.parse().map_err(err)?;
    let pt = point(d, r, exponents, coords)?;
    to_py(py, &regions::necessary_gap(&pt, thm).map_err(err)?)
}

/// Reciprocal coordinates of a named vertex, as strings.
#[pyfunction]
#[pyo3(signature = (thm, d, name, r = None))]
fn vertex(thm: &str, d: u32, name: &str, r: Option<&str>) -> PyResult<Vec<String>> {
    let thm: TheoremId = thm.parse().map_err(err)?;
    let v = regions::vertex(thm, d, r.map(exponent).transpose()?, name).map_err(err)?;
    Ok(v.iter().map(Q::to_string).collect())
}

/// All named vertices: `[(name, [coords...]), ...]`.
#[pyfunction]
#[pyo3(signature = (thm, d, r = None))]
fn vertex_table(thm: &str, d: u32, r: Option<&str>) -> PyResult<Vec<(String, Vec<String>)>> {
    let thm: TheoremId = thm.parse().map_err(err)?;
    let t = regions::vertex_table(thm, d, r.map(exponent).transpose()?).map_err(err)?;
    Ok(t.into_iter().map(|(n, c)| (n, c.iter().map(Q::to_string).collect())).collect())
}

#[pyfunction]
fn theorems() -> Vec<&'static str> {
    TheoremId::ALL.iter().map(|t| t.name()).collect()
}

/// Interpolation-table rows at `(d, r)`, each with a `matches` flag.
#[pyfunction]
fn reproduce_table<'py>(py: Python<'py>, d: u32, r: &str) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &sphlab::interp::reproduce_table(d, exponent(r)?).map_err(err)?)
}

#[pyfunction]
fn suites() -> Vec<&'static str> {
    sphlab::suites::SUITES.to_vec()
}

/// Run a named check suite; returns `{suite, seed, passed, checks}`.
#[pyfunction]
#[pyo3(signature = (name, seed = 0))]
fn run_suite<'py>(py: Python<'py>, name: &str, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &sphlab::suites::run_suite(name, seed).map_err(err)?)
}

/// α, β, γ fits for one necessary-condition row and the exact check at `q`.
#[pyfunction]
#[pyo3(signature = (row, r, p, q, d = 2, lo = 6, hi = 11))]
fn row_sweep<'py>(py: Python<'py>, row: &str, r: &str, p: &str, q: &str, d: usize, lo: i32, hi: i32) -> PyResult<Bound<'py, PyAny>> {
    let row = row.parse().map_err(err)?;
    let fits = sweep::row_fits(row, d, exponent(r)?, exponent(p)?, &sweep::delta_ladder(lo, hi)).map_err(err)?;
    let report = sweep::necessary_condition_report(&fits, exponent(q)?).map_err(err)?;
    to_py(py, &serde_json::json!({ "report": report, "fits": fits }))
}

/// Weak-type ratio sweep over the rectangle family at `(p1, p2, p)`.
#[pyfunction]
#[pyo3(signature = (p1, p2, p, seed = 0, samples = 400))]
fn weak_type_sweep<'py>(py: Python<'py>, p1: &str, p2: &str, p: &str, seed: u64, samples: usize) -> PyResult<Bound<'py, PyAny>> {
    let mut plan = WeakTypePlan::new(exponent(p1)?, exponent(p2)?, exponent(p)?);
    plan.seed = seed;
    plan.samples = samples;
    to_py(py, &sweep::weak_type_ratio_sweep(&plan).map_err(err)?)
}

#[pymodule]
pub fn sphlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyField>()?;
    m.add_function(wrap_pyfunction!(spherical_average, m)?)?;
    m.add_function(wrap_pyfunction!(maximal_average, m)?)?;
    m.add_function(wrap_pyfunction!(ar_value, m)?)?;
    m.add_function(wrap_pyfunction!(bilinear_average, m)?)?;
    m.add_function(wrap_pyfunction!(rotated_bilinear, m)?)?;
    m.add_function(wrap_pyfunction!(linearized_bilinear, m)?)?;
    m.add_function(wrap_pyfunction!(domination_constant, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(necessary_gap, m)?)?;
    m.add_function(wrap_pyfunction!(vertex, m)?)?;
    m.add_function(wrap_pyfunction!(vertex_table, m)?)?;
    m.add_function(wrap_pyfunction!(theorems, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce_table, m)?)?;
    m.add_function(wrap_pyfunction!(suites, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(row_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(weak_type_sweep, m)?)?;
    Ok(())
}
