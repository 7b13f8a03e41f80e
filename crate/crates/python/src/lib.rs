//! Python bindings for `fidbound`.

use fidbound::bounds;
use fidbound::families as fam;
use fidbound::fock;
use fidbound::search;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: fidbound::Error) -> PyErr {
    match e {
        fidbound::Error::CutoffExceeded { .. } | fidbound::Error::NoFeasiblePoint(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for fidbound::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

#[pyclass(
    name = "Family",
    module = "pyfidbound",
    frozen,
    eq,
    skip_from_py_object
)]
#[derive(Clone, PartialEq)]
struct PyFamily(fidbound::Family);

#[pymethods]
impl PyFamily {
    /// `Family("negbin", mu=2.0)`, `Family("binomial", big_m=5)`, `Family("phase")`, ...
    #[new]
    #[pyo3(signature = (name, mu=None, big_m=None))]
    fn new(name: &str, mu: Option<f64>, big_m: Option<u32>) -> PyResult<Self> {
        let f = match (name, mu, big_m) {
            ("coherent", None, None) => fidbound::Family::Coherent,
            ("squeezed", None, None) => fidbound::Family::Squeezed,
            ("phase", None, None) => fidbound::Family::phase(),
            ("negbin", Some(mu), None) => fidbound::Family::negbin(mu).py()?,
            ("binomial", None, Some(m)) => fidbound::Family::binomial(m).py()?,
            _ => {
                return Err(PyValueError::new_err(format!(
                    "unknown family or wrong hyper-parameters: {name} (mu={mu:?}, big_m={big_m:?})"
                )))
            }
        };
        Ok(Self(f))
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.0.name()
    }

    #[getter]
    fn hyper(&self) -> Option<f64> {
        self.0.hyper()
    }

    fn member(&self, x: f64) -> PyResult<PyFamilyParam> {
        self.0.member(x).py().map(PyFamilyParam)
    }

    fn __repr__(&self) -> String {
        format!("Family({})", self.0)
    }
}

#[pyclass(
    name = "FamilyParam",
    module = "pyfidbound",
    frozen,
    skip_from_py_object
)]
#[derive(Clone)]
struct PyFamilyParam(fam::FamilyParam);

#[pymethods]
impl PyFamilyParam {
    #[staticmethod]
    fn coherent(alpha: f64) -> PyResult<Self> {
        fam::FamilyParam::coherent(alpha).py().map(Self)
    }

    #[staticmethod]
    fn squeezed(zeta: f64) -> PyResult<Self> {
        fam::FamilyParam::squeezed(zeta).py().map(Self)
    }

    #[staticmethod]
    fn negbin(zeta: f64, mu: f64) -> PyResult<Self> {
        fam::FamilyParam::negbin(zeta, mu).py().map(Self)
    }

    #[staticmethod]
    fn binomial(p: f64, big_m: u32) -> PyResult<Self> {
        fam::FamilyParam::binomial(p, big_m).py().map(Self)
    }

    #[staticmethod]
    fn fock_pair(n: u32, m: u32, beta: f64) -> PyResult<Self> {
        fam::FamilyParam::fock_pair(n, m, beta).py().map(Self)
    }

    fn energy(&self) -> PyResult<f64> {
        fam::energy_closed(&self.0).py()
    }

    fn fidelity(&self, other: &PyFamilyParam) -> PyResult<f64> {
        fam::fidelity_closed(&self.0, &other.0).py()
    }

    fn build_state(&self) -> PyResult<PyFockVector> {
        fam::build_state(&self.0).py().map(PyFockVector)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

#[pyclass(name = "FockVector", module = "pyfidbound", frozen)]
struct PyFockVector(fock::FockVector);

#[pymethods]
impl PyFockVector {
    #[new]
    fn new(coeffs: Vec<f64>) -> PyResult<Self> {
        fock::FockVector::new(coeffs).py().map(Self)
    }

    #[getter]
    fn coeffs(&self) -> Vec<f64> {
        self.0.coeffs().to_vec()
    }

    #[getter]
    fn cutoff(&self) -> usize {
        self.0.cutoff()
    }

    fn norm_sqr(&self) -> f64 {
        self.0.norm_sqr()
    }

    fn fidelity(&self, other: &PyFockVector) -> f64 {
        fock::fidelity_fock(&self.0, &other.0)
    }

    fn mean_energy(&self) -> f64 {
        fock::mean_energy(&self.0)
    }

    /// `(mean, variance)` of the photon number.
    fn photon_moments(&self) -> (f64, f64) {
        fock::photon_moments(&self.0)
    }

    fn mandel_q(&self) -> PyResult<f64> {
        fock::mandel_q(&self.0).py()
    }

    fn is_hyper_poissonian(&self) -> PyResult<bool> {
        fock::is_hyper_poissonian(&self.0).py()
    }

    fn __len__(&self) -> usize {
        self.0.coeffs().len()
    }
}

#[pyclass(name = "BoundResult", module = "pyfidbound", frozen, get_all)]
struct PyBoundResult {
    f_max: f64,
    extremal_param: f64,
    branch: &'static str,
}

impl From<bounds::BoundResult> for PyBoundResult {
    fn from(r: bounds::BoundResult) -> Self {
        Self {
            f_max: r.f_max,
            extremal_param: r.extremal_param,
            branch: r.branch.as_str(),
        }
    }
}

#[pymethods]
impl PyBoundResult {
    fn __repr__(&self) -> String {
        format!(
            "BoundResult(f_max={}, extremal_param={}, branch='{}')",
            self.f_max, self.extremal_param, self.branch
        )
    }
}

#[pyclass(name = "VerifyReport", module = "pyfidbound", frozen, get_all)]
struct PyVerifyReport {
    rel: f64,
    f_closed: f64,
    f_oracle: f64,
    param_closed: f64,
    param_oracle: f64,
    abs_gap: f64,
    branch: &'static str,
    coarse_points: usize,
    infeasible_points: usize,
    boundary_approach: Vec<(f64, f64)>,
    boundary_monotone: bool,
    passed: bool,
}

#[pymethods]
impl PyVerifyReport {
    fn __repr__(&self) -> String {
        format!(
            "VerifyReport(f_closed={}, f_oracle={}, abs_gap={:e}, branch='{}', passed={})",
            self.f_closed, self.f_oracle, self.abs_gap, self.branch, self.passed
        )
    }
}

#[pyfunction]
fn y_from_e(rel: f64) -> PyResult<f64> {
    bounds::y_from_e(rel).py()
}

#[pyfunction]
#[pyo3(signature = (sym, negative=false))]
fn e_from_y(sym: f64, negative: bool) -> PyResult<f64> {
    let sign = if negative {
        bounds::Sign::Negative
    } else {
        bounds::Sign::Positive
    };
    bounds::e_from_y(sym, sign).py()
}

#[pyfunction]
fn fmax(family: &PyFamily, sym: f64) -> PyResult<PyBoundResult> {
    bounds::fmax(&family.0, sym).py().map(Into::into)
}

#[pyfunction]
fn fmax_for_rel(family: &PyFamily, rel: f64) -> PyResult<PyBoundResult> {
    bounds::fmax_for_rel(&family.0, rel).py().map(Into::into)
}

#[pyfunction]
fn ymax_for_fidelity(family: &PyFamily, f: f64) -> PyResult<f64> {
    bounds::ymax_for_fidelity(&family.0, f).py()
}

#[pyfunction]
fn extremal_param(family: &PyFamily, rel: f64) -> PyResult<(f64, &'static str)> {
    bounds::extremal_param(&family.0, rel)
        .py()
        .map(|(v, b)| (v, b.as_str()))
}

#[pyfunction]
fn constrained_partner(family: &PyFamily, param1: f64, rel: f64) -> PyResult<f64> {
    search::constrained_partner(&family.0, param1, rel).py()
}

#[pyfunction]
#[pyo3(signature = (family, rel, coarse_points=10_001, tolerance=None))]
fn oracle_max_fidelity(
    py: Python<'_>,
    family: &PyFamily,
    rel: f64,
    coarse_points: usize,
    tolerance: Option<f64>,
) -> PyResult<PyVerifyReport> {
    let grid = search::GridSpec {
        coarse_points,
        ..search::GridSpec::default()
    };
    let f = family.0;
    let r = py
        .detach(move || search::oracle_max_fidelity(&f, rel, &grid))
        .py()?;
    Ok(PyVerifyReport {
        rel: r.rel,
        f_closed: r.f_closed,
        f_oracle: r.f_oracle,
        param_closed: r.param_closed,
        param_oracle: r.param_oracle,
        abs_gap: r.abs_gap,
        branch: r.branch.as_str(),
        coarse_points: r.grid.coarse_points,
        infeasible_points: r.infeasible_points,
        boundary_monotone: r.boundary_monotone,
        passed: r.passes_with(tolerance),
        boundary_approach: r.boundary_approach,
    })
}

type ScanRow = (f64, f64, f64, f64, &'static str);

/// Rows `(y, e_rel, f_max, param_star, branch)` for each symmetric gap.
#[pyfunction]
fn scan_tradeoff(family: &PyFamily, ys: Vec<f64>) -> PyResult<Vec<ScanRow>> {
    let rows = search::scan_tradeoff(&family.0, &ys).py()?;
    Ok(rows
        .into_iter()
        .map(|r| {
            (
                r.sym,
                r.rel_pos,
                r.f_max,
                r.extremal_param,
                r.branch.as_str(),
            )
        })
        .collect())
}

/// `(fidelity, delta_e)` for `|n>` against `sqrt(1-b^2)|n> + b|m>`.
#[pyfunction]
fn fock_pair_tradeoff(n: u32, m: u32, beta: f64) -> PyResult<(f64, f64)> {
    fam::fock_pair_tradeoff(n, m, beta).py()
}

#[pymodule]
fn pyfidbound(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyFamily>()?;
    m.add_class::<PyFamilyParam>()?;
    m.add_class::<PyFockVector>()?;
    m.add_class::<PyBoundResult>()?;
    m.add_class::<PyVerifyReport>()?;
    m.add_function(wrap_pyfunction!(y_from_e, m)?)?;
    m.add_function(wrap_pyfunction!(e_from_y, m)?)?;
    m.add_function(wrap_pyfunction!(fmax, m)?)?;
    m.add_function(wrap_pyfunction!(fmax_for_rel, m)?)?;
    m.add_function(wrap_pyfunction!(ymax_for_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(extremal_param, m)?)?;
    m.add_function(wrap_pyfunction!(constrained_partner, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_max_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(scan_tradeoff, m)?)?;
    m.add_function(wrap_pyfunction!(fock_pair_tradeoff, m)?)?;
    Ok(())
}
