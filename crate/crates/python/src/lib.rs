//! Python bindings. Errors from the library surface as `HelixkitError`, or
//! its subclass `CurveError` when the curve itself is at fault.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use helixkit::classify::{self as cls, AxisEstimate, HelixKind, Method, Tolerances};
use helixkit::expr::{CurveSource, CurveSpec, SampledCurve};
use helixkit::frenet::{self, FrenetApparatus, FrenetConfig};
use helixkit::harmonic::{self, HarmonicProfile};
use helixkit::report::{self, AnalysisConfig};
use helixkit::synthesize::{self as syn, CurvaturePrescription};

create_exception!(pyhelixkit, HelixkitError, PyValueError);
create_exception!(pyhelixkit, CurveError, HelixkitError);

fn err(e: helixkit::Error) -> PyErr {
    if e.is_curve_error() {
        CurveError::new_err(e.to_string())
    } else {
        HelixkitError::new_err(e.to_string())
    }
}

fn kind(name: &str) -> PyResult<HelixKind> {
    HelixKind::from_name(name).ok_or_else(|| HelixkitError::new_err(format!("unknown helix kind `{name}`")))
}

fn method(name: &str) -> PyResult<Method> {
    match name {
        "algebraic" => Ok(Method::Algebraic),
        "differential" => Ok(Method::Differential),
        _ => Err(HelixkitError::new_err(format!("unknown method `{name}`"))),
    }
}

fn tolerances(constancy: f64, nonzero: f64, angle: f64) -> PyResult<Tolerances> {
    let t = Tolerances {
        constancy,
        nonzero,
        angle,
    };
    t.validate().map_err(err)?;
    Ok(t)
}

/// A curve in E^n: analytic, sampled or given by a curvature prescription.
#[pyclass(name = "Curve", module = "pyhelixkit", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyCurve {
    inner: CurveSpec,
}

#[pymethods]
impl PyCurve {
    /// Parses `dim N on [a, b]: x = ...; y = ...`.
    #[staticmethod]
    fn parse(src: &str) -> PyResult<Self> {
        Ok(PyCurve {
            inner: helixkit::expr::parse_curve(src).map_err(err)?,
        })
    }

    /// Circular helix `(a cos t, a sin t, b t)` on `[0, 2π]`.
    #[staticmethod]
    fn helix(a: f64, b: f64) -> PyResult<Self> {
        Ok(PyCurve {
            inner: syn::make_circular_helix(a, b).map_err(err)?,
        })
    }

    /// Reads a curve file (grammar, `.csv` samples or `.json` prescription).
    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        Ok(PyCurve {
            inner: helixkit::io::read_input(&path).map_err(err)?,
        })
    }

    /// Curve through the points `points[i]` at parameters `t[i]`.
    #[staticmethod]
    fn sampled(t: Vec<f64>, points: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(PyCurve {
            inner: CurveSpec::sampled(SampledCurve::new(t, points).map_err(err)?),
        })
    }

    /// Curve with prescribed curvatures `k` (expressions in `s`).
    #[staticmethod]
    #[pyo3(signature = (k, span, h, samples=None))]
    fn prescribed(k: Vec<String>, span: (f64, f64), h: f64, samples: Option<usize>) -> PyResult<Self> {
        let mut p = CurvaturePrescription::new(&k, span, h).map_err(err)?;
        if let Some(m) = samples {
            p = p.with_samples(m);
        }
        Ok(PyCurve {
            inner: CurveSpec::synthetic(p),
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn interval(&self) -> (f64, f64) {
        self.inner.interval()
    }

    #[getter]
    fn source(&self) -> &'static str {
        match self.inner.source() {
            CurveSource::Analytic(_) => "analytic",
            CurveSource::Sampled(_) => "sampled",
            CurveSource::Synthetic(_) => "prescription",
        }
    }

    fn __repr__(&self) -> String {
        let (a, b) = self.inner.interval();
        format!("Curve(dim={}, source={}, interval=[{a}, {b}])", self.inner.dim(), self.source())
    }
}

/// Frenet frame and curvatures on a grid.
#[pyclass(name = "Apparatus", module = "pyhelixkit", frozen)]
pub struct PyApparatus {
    inner: FrenetApparatus,
}

#[pymethods]
impl PyApparatus {
    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn t(&self) -> Vec<f64> {
        self.inner.grid().to_vec()
    }

    #[getter]
    fn s(&self) -> Vec<f64> {
        self.inner.arclength()
    }

    #[getter]
    fn points(&self) -> Vec<Vec<f64>> {
        self.inner.samples().iter().map(|p| p.point.clone()).collect()
    }

    /// `k_i` over the grid, `1 <= i <= n - 1`.
    fn curvature(&self, i: usize) -> PyResult<Vec<f64>> {
        if i == 0 || i >= self.inner.dim() {
            return Err(HelixkitError::new_err(format!("curvature index {i} out of range")));
        }
        Ok(self.inner.curvature_values(i))
    }

    /// Frame rows `V_1..V_n` at grid point `p`.
    fn frame(&self, p: usize) -> PyResult<Vec<Vec<f64>>> {
        self.inner
            .samples()
            .get(p)
            .map(|q| q.frame.clone())
            .ok_or_else(|| HelixkitError::new_err(format!("grid index {p} out of range")))
    }

    /// `(passes, min |k_i| per curvature)` for the nonzero tolerance `tol`.
    #[pyo3(signature = (tol=1e-8))]
    fn nondegeneracy(&self, tol: f64) -> (bool, Vec<f64>) {
        let r = frenet::check_nondegenerate(&self.inner, tol);
        (r.pass, r.margins)
    }
}

/// One harmonic system (`H`, `Hstar` or `G`) sampled along the grid.
#[pyclass(name = "Profile", module = "pyhelixkit", frozen)]
pub struct PyProfile {
    inner: HarmonicProfile,
}

#[pymethods]
impl PyProfile {
    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.name()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn s(&self) -> Vec<f64> {
        self.inner.s.clone()
    }

    #[getter]
    fn sumsq(&self) -> Vec<f64> {
        self.inner.sumsq.clone()
    }

    #[getter]
    fn differential(&self) -> Vec<f64> {
        self.inner.differential.clone()
    }

    #[getter]
    fn c0(&self) -> Option<f64> {
        self.inner.c0
    }

    /// Range of valid function indices, inclusive.
    #[getter]
    fn indices(&self) -> (usize, usize) {
        (self.inner.first_index(), self.inner.last_index())
    }

    fn values(&self, i: usize) -> PyResult<Vec<f64>> {
        self.check(i)?;
        Ok(self.inner.series(i))
    }

    /// Arclength derivative of function `i`.
    fn derivatives(&self, i: usize) -> PyResult<Vec<f64>> {
        self.check(i)?;
        Ok((0..self.inner.len()).map(|p| self.inner.dvalue(p, i)).collect())
    }
}

impl PyProfile {
    fn check(&self, i: usize) -> PyResult<()> {
        if i < self.inner.first_index() || i > self.inner.last_index() {
            return Err(HelixkitError::new_err(format!("function index {i} out of range")));
        }
        Ok(())
    }
}

#[pyclass(name = "Verdict", module = "pyhelixkit", frozen)]
pub struct PyVerdict {
    inner: cls::Verdict,
}

#[pymethods]
impl PyVerdict {
    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.name()
    }

    #[getter]
    fn method(&self) -> &'static str {
        match self.inner.method {
            Method::Algebraic => "algebraic",
            Method::Differential => "differential",
        }
    }

    #[getter]
    fn is_helix(&self) -> bool {
        self.inner.is_helix
    }

    #[getter]
    fn constancy_residual(&self) -> f64 {
        self.inner.constancy_residual
    }

    #[getter]
    fn nonzero_margin(&self) -> f64 {
        self.inner.nonzero_margin
    }

    fn __bool__(&self) -> bool {
        self.inner.is_helix
    }

    fn __repr__(&self) -> String {
        format!(
            "Verdict(kind={}, method={}, is_helix={}, residual={:e})",
            self.kind(),
            self.method(),
            if self.inner.is_helix { "True" } else { "False" },
            self.inner.constancy_residual
        )
    }
}

/// Axis estimate: unit vector `x`, angle `phi` and verification data.
#[pyclass(name = "Axis", module = "pyhelixkit", frozen)]
pub struct PyAxis {
    inner: AxisEstimate,
}

#[pymethods]
impl PyAxis {
    #[getter]
    fn x(&self) -> Vec<f64> {
        self.inner.x.clone()
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.inner.phi
    }

    #[getter]
    fn spread(&self) -> f64 {
        self.inner.verification.spread
    }

    #[getter]
    fn verified(&self) -> bool {
        self.inner.verification.pass
    }

    #[getter]
    fn max_deviation(&self) -> f64 {
        self.inner.max_deviation
    }

    fn __repr__(&self) -> String {
        format!("Axis(x={:?}, phi={})", self.inner.x, self.inner.phi)
    }
}

#[pyfunction]
#[pyo3(signature = (curve, size=512, jet_order=None))]
fn build_apparatus(curve: &PyCurve, size: usize, jet_order: Option<usize>) -> PyResult<PyApparatus> {
    let cfg = FrenetConfig {
        jet_order,
        ..FrenetConfig::default()
    };
    Ok(PyApparatus {
        inner: frenet::build_apparatus(&curve.inner, size, &cfg).map_err(err)?,
    })
}

#[pyfunction]
fn harmonic_h(app: &PyApparatus) -> PyResult<PyProfile> {
    Ok(PyProfile {
        inner: harmonic::harmonic_h(&app.inner).map_err(err)?,
    })
}

#[pyfunction]
fn harmonic_hstar(app: &PyApparatus) -> PyResult<PyProfile> {
    Ok(PyProfile {
        inner: harmonic::harmonic_hstar(&app.inner).map_err(err)?,
    })
}

/// `G_1..G_n` with integration constant `c0`; fitted when omitted.
#[pyfunction]
#[pyo3(signature = (app, c0=None))]
fn functions_g(app: &PyApparatus, c0: Option<f64>) -> PyResult<PyProfile> {
    let c0 = match c0 {
        Some(c) => c,
        None => harmonic::fit_g_constant(&app.inner).map_err(err)?.0,
    };
    Ok(PyProfile {
        inner: harmonic::functions_g(&app.inner, c0).map_err(err)?,
    })
}

/// `(c0, residual)` minimizing the spread of the G sum of squares.
#[pyfunction]
fn fit_g_constant(app: &PyApparatus) -> PyResult<(f64, f64)> {
    harmonic::fit_g_constant(&app.inner).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (kind, profile, method="algebraic", constancy=1e-6, nonzero=1e-8, angle=1e-6))]
fn classify(
    kind: &str,
    profile: &PyProfile,
    method: &str,
    constancy: f64,
    nonzero: f64,
    angle: f64,
) -> PyResult<PyVerdict> {
    let tol = tolerances(constancy, nonzero, angle)?;
    Ok(PyVerdict {
        inner: cls::classify(self::kind(kind)?, &profile.inner, self::method(method)?, &tol).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (app, profile, verdict, constancy=1e-6, nonzero=1e-8, angle=1e-6))]
fn reconstruct_axis(
    app: &PyApparatus,
    profile: &PyProfile,
    verdict: &PyVerdict,
    constancy: f64,
    nonzero: f64,
    angle: f64,
) -> PyResult<PyAxis> {
    let tol = tolerances(constancy, nonzero, angle)?;
    let v = &verdict.inner;
    Ok(PyAxis {
        inner: cls::reconstruct_axis(v.kind, &app.inner, &profile.inner, v, &tol).map_err(err)?,
    })
}

/// Grid search for a unit `X` making a constant angle with `V_j`.
#[pyfunction]
#[pyo3(signature = (app, j, resolution=64, constancy=1e-6, nonzero=1e-8, angle=1e-6))]
fn brute_force_axis(
    app: &PyApparatus,
    j: usize,
    resolution: usize,
    constancy: f64,
    nonzero: f64,
    angle: f64,
) -> PyResult<Option<PyAxis>> {
    let tol = tolerances(constancy, nonzero, angle)?;
    let found = cls::brute_force_axis(&app.inner, j, resolution, &tol, cls::DEFAULT_BUDGET).map_err(err)?;
    Ok(found.map(|inner| PyAxis { inner }))
}

/// Full analysis; returns the JSON report.
#[pyfunction]
#[pyo3(signature = (curve, name="curve", grid=512, kinds=None, oracle=None, constancy=1e-6, nonzero=1e-8, angle=1e-6))]
#[allow(clippy::too_many_arguments)]
fn analyze(
    py: Python<'_>,
    curve: &PyCurve,
    name: &str,
    grid: usize,
    kinds: Option<Vec<String>>,
    oracle: Option<usize>,
    constancy: f64,
    nonzero: f64,
    angle: f64,
) -> PyResult<String> {
    let kinds = match kinds {
        Some(ks) => ks.iter().map(|k| kind(k)).collect::<PyResult<Vec<_>>>()?,
        None => HelixKind::ALL.to_vec(),
    };
    let cfg = AnalysisConfig {
        grid,
        tolerances: tolerances(constancy, nonzero, angle)?,
        kinds,
        oracle,
        ..AnalysisConfig::default()
    };
    let spec = curve.inner.clone();
    let name = name.to_string();
    let analysis = py.detach(move || report::analyze(&name, &spec, &cfg)).map_err(err)?;
    Ok(analysis.report.to_json())
}

/// Integrates a prescribed curve; returns the sampled curve and its
/// apparatus.
#[pyfunction]
fn synthesize(py: Python<'_>, curve: &PyCurve) -> PyResult<(PyCurve, PyApparatus)> {
    let CurveSource::Synthetic(p) = curve.inner.source() else {
        return Err(HelixkitError::new_err("synthesize needs a prescribed curve"));
    };
    let p = p.clone();
    let (sampled, app) = py.detach(move || syn::integrate_frenet(&p)).map_err(err)?;
    Ok((PyCurve { inner: sampled }, PyApparatus { inner: app }))
}

/// Seeded fixture of the given kind (`inclined`, `v2`, `vn` or `generic`).
#[pyfunction]
fn fixture(kind: &str, n: usize, seed: u64) -> PyResult<PyCurve> {
    let p = match kind {
        "inclined" => syn::make_inclined_fixture(n, seed),
        "v2" | "v2_slant" => syn::make_v2_fixture(n, seed),
        "vn" | "vn_slant" => syn::make_vn_fixture(n, seed),
        "generic" => syn::generic_negative(n, seed),
        _ => return Err(HelixkitError::new_err(format!("unknown fixture kind `{kind}`"))),
    }
    .map_err(err)?;
    Ok(PyCurve {
        inner: CurveSpec::synthetic(p),
    })
}

#[pymodule]
fn pyhelixkit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("HelixkitError", py.get_type::<HelixkitError>())?;
    m.add("CurveError", py.get_type::<CurveError>())?;
    m.add_class::<PyCurve>()?;
    m.add_class::<PyApparatus>()?;
    m.add_class::<PyProfile>()?;
    m.add_class::<PyVerdict>()?;
    m.add_class::<PyAxis>()?;
    m.add_function(wrap_pyfunction!(build_apparatus, m)?)?;
    m.add_function(wrap_pyfunction!(harmonic_h, m)?)?;
    m.add_function(wrap_pyfunction!(harmonic_hstar, m)?)?;
    m.add_function(wrap_pyfunction!(functions_g, m)?)?;
    m.add_function(wrap_pyfunction!(fit_g_constant, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct_axis, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_axis, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(fixture, m)?)?;
    Ok(())
}
