//! Python bindings: parameters, steady states of the four methods, sweeps,
//! and the Gaussian-state toolkit.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qwire_core::compare::{self, Axis, Method, SweepOptions};
use qwire_core::exact::QuadratureSpec;
use qwire_core::model::normal_modes;
use qwire_core::{Bath, CovarianceMatrix, DiscordOptions, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidParameter { .. } | Error::Domain(_) | Error::Detuned => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(to_py)
}

fn method_from(name: &str) -> PyResult<Method> {
    Method::ALL
        .into_iter()
        .find(|m| m.name() == name)
        .ok_or_else(|| {
            PyValueError::new_err(format!(
                "unknown method `{name}`; expected global, local, redfield or exact"
            ))
        })
}

fn quadrature(rel_tol: f64) -> QuadratureSpec {
    QuadratureSpec {
        rel_tol,
        ..QuadratureSpec::default()
    }
}

/// Physical parameters of the wire.
#[pyclass(frozen, skip_from_py_object, module = "qwire")]
#[derive(Clone, Copy)]
struct WireParams(qwire_core::WireParams);

#[pymethods]
impl WireParams {
    #[new]
    #[pyo3(signature = (omega_c, omega_h, k, t_c, t_h, lambda_sq = 1e-3, cutoff = 1e3))]
    fn new(
        omega_c: f64,
        omega_h: f64,
        k: f64,
        t_c: f64,
        t_h: f64,
        lambda_sq: f64,
        cutoff: f64,
    ) -> PyResult<Self> {
        qwire_core::WireParams::new(omega_c, omega_h, k, t_c, t_h, lambda_sq, cutoff)
            .map(WireParams)
            .map_err(to_py)
    }

    /// Parameters of a named preset (`fig1a` ... `fig2c`).
    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        qwire_core::cli::preset(name)
            .map(|s| WireParams(s.params))
            .ok_or_else(|| PyValueError::new_err(format!("unknown preset `{name}`")))
    }

    /// Copy with a different spring constant.
    fn with_k(&self, k: f64) -> PyResult<Self> {
        self.0.with_k(k).map(WireParams).map_err(to_py)
    }

    #[getter]
    fn omega_c(&self) -> f64 {
        self.0.omega_c
    }
    #[getter]
    fn omega_h(&self) -> f64 {
        self.0.omega_h
    }
    #[getter]
    fn k(&self) -> f64 {
        self.0.k
    }
    #[getter]
    fn t_c(&self) -> f64 {
        self.0.t_c
    }
    #[getter]
    fn t_h(&self) -> f64 {
        self.0.t_h
    }
    #[getter]
    fn lambda_sq(&self) -> f64 {
        self.0.lambda_sq
    }
    #[getter]
    fn cutoff(&self) -> f64 {
        self.0.cutoff
    }

    /// `(Ω₊, Ω₋, θ)`.
    fn normal_modes(&self) -> (f64, f64, f64) {
        let m = normal_modes(&self.0);
        (m.omega_plus, m.omega_minus, m.theta)
    }

    fn __repr__(&self) -> String {
        let p = &self.0;
        format!(
            "WireParams(omega_c={}, omega_h={}, k={}, t_c={}, t_h={}, lambda_sq={}, cutoff={})",
            p.omega_c, p.omega_h, p.k, p.t_c, p.t_h, p.lambda_sq, p.cutoff
        )
    }
}

/// Two-mode Gaussian state in the quadrature order `(X_c, P_c, X_h, P_h)`.
#[pyclass(frozen, skip_from_py_object, module = "qwire")]
#[derive(Clone, Copy)]
struct Covariance(CovarianceMatrix);

#[pymethods]
impl Covariance {
    #[new]
    fn new(rows: [[f64; 4]; 4]) -> Self {
        Covariance(CovarianceMatrix::from_rows(rows))
    }

    fn matrix(&self) -> [[f64; 4]; 4] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.0.get(i, j)))
    }

    fn __getitem__(&self, idx: (usize, usize)) -> PyResult<f64> {
        if idx.0 < 4 && idx.1 < 4 {
            Ok(self.0.get(idx.0, idx.1))
        } else {
            Err(pyo3::exceptions::PyIndexError::new_err(
                "indices must be in 0..4",
            ))
        }
    }

    fn symplectic_eigenvalues(&self) -> PyResult<(f64, f64)> {
        qwire_core::symplectic_eigenvalues(&self.0).map_err(to_py)
    }

    fn entropy(&self) -> PyResult<f64> {
        qwire_core::entropy(&self.0).map_err(to_py)
    }

    fn mutual_information(&self) -> PyResult<f64> {
        qwire_core::mutual_information(&self.0).map_err(to_py)
    }

    fn log_negativity(&self) -> PyResult<f64> {
        qwire_core::log_negativity(&self.0).map_err(to_py)
    }

    fn fidelity(&self, other: &Covariance) -> PyResult<f64> {
        qwire_core::fidelity(&self.0, &other.0).map_err(to_py)
    }

    /// Gaussian discord with the measurement on `measured` (`cold` or `hot`).
    #[pyo3(signature = (measured = "hot"))]
    fn discord(&self, measured: &str) -> PyResult<f64> {
        qwire_core::gaussian_discord(
            &self.0,
            parse::<Bath>(measured)?,
            &DiscordOptions::default(),
        )
        .map_err(to_py)
    }

    #[pyo3(signature = (measured = "hot"))]
    fn classical_correlations(&self, measured: &str) -> PyResult<f64> {
        qwire_core::classical_correlations(
            &self.0,
            parse::<Bath>(measured)?,
            &DiscordOptions::default(),
        )
        .map_err(to_py)
    }
}

/// Steady state produced by one method.
#[pyclass(frozen, module = "qwire")]
struct SteadyState(compare::SteadyStateResult);

#[pymethods]
impl SteadyState {
    #[getter]
    fn method(&self) -> &'static str {
        self.0.method.name()
    }
    #[getter]
    fn covariance(&self) -> Covariance {
        Covariance(self.0.covariance)
    }
    #[getter]
    fn qdot_h(&self) -> f64 {
        self.0.heat_currents.hot
    }
    #[getter]
    fn qdot_c(&self) -> f64 {
        self.0.heat_currents.cold
    }
    #[getter]
    fn physical(&self) -> bool {
        self.0.diagnostics.physical
    }
    #[getter]
    fn min_symplectic_eigenvalue(&self) -> f64 {
        self.0.diagnostics.min_symplectic_eigenvalue
    }
    #[getter]
    fn secular_margin(&self) -> f64 {
        self.0.diagnostics.secular_margin
    }
    #[getter]
    fn residual(&self) -> Option<f64> {
        self.0.diagnostics.residual
    }
    #[getter]
    fn quadrature_error(&self) -> Option<f64> {
        self.0.diagnostics.quadrature_error
    }

    fn __repr__(&self) -> String {
        format!(
            "SteadyState(method={}, qdot_h={:e})",
            self.method(),
            self.qdot_h()
        )
    }
}

/// Steady state of one method: `global`, `local`, `redfield` or `exact`.
#[pyfunction]
#[pyo3(signature = (params, method, rel_tol = 1e-9))]
fn steady_state(params: &WireParams, method: &str, rel_tol: f64) -> PyResult<SteadyState> {
    compare::solve_method(method_from(method)?, &params.0, &quadrature(rel_tol))
        .map(SteadyState)
        .map_err(to_py)
}

/// All four methods, keyed by name; a failed approximate method maps to `None`.
#[pyfunction]
#[pyo3(signature = (params, rel_tol = 1e-9))]
fn solve_all<'py>(
    py: Python<'py>,
    params: &WireParams,
    rel_tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    for o in compare::solve_all(&params.0, &quadrature(rel_tol)).map_err(to_py)? {
        out.set_item(o.method.name(), o.result.ok().map(SteadyState))?;
    }
    Ok(out)
}

/// Sweep `axis` over `grid`; one dict per point with per-method figures.
#[pyfunction]
#[pyo3(signature = (params, axis, grid, jobs = None, measured = "hot"))]
fn sweep<'py>(
    py: Python<'py>,
    params: &WireParams,
    axis: &str,
    grid: Vec<f64>,
    jobs: Option<usize>,
    measured: &str,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let options = SweepOptions {
        measured: parse(measured)?,
        jobs,
        ..SweepOptions::default()
    };
    let rows = compare::sweep(&params.0, parse::<Axis>(axis)?, &grid, &options).map_err(to_py)?;
    rows.into_iter()
        .map(|row| {
            let row = row.map_err(to_py)?;
            let d = PyDict::new(py);
            d.set_item(axis, row.value)?;
            d.set_item("secular_margin", row.secular_margin)?;
            d.set_item("quadrature_error", row.quadrature_error)?;
            for m in Method::ALL {
                let r = row.method(m);
                let md = PyDict::new(py);
                md.set_item("fidelity_to_exact", r.fidelity_to_exact)?;
                md.set_item("qdot_h", r.qdot_h)?;
                md.set_item("mutual_info", r.mutual_info)?;
                md.set_item("discord", r.discord)?;
                md.set_item("classical", r.classical)?;
                md.set_item("log_neg", r.log_neg)?;
                d.set_item(m.name(), md)?;
            }
            Ok(d)
        })
        .collect()
}

/// `(name, method, value, bound, passed)`.
type CheckTuple = (&'static str, &'static str, f64, f64, bool);

/// Invariant checks of every solver.
#[pyfunction]
fn validate(params: &WireParams) -> PyResult<Vec<CheckTuple>> {
    Ok(compare::validate(&params.0, &QuadratureSpec::default())
        .map_err(to_py)?
        .into_iter()
        .map(|c| (c.name, c.method.name(), c.value, c.bound, c.passed))
        .collect())
}

#[pyfunction]
fn log_grid(lo: f64, hi: f64, n: usize) -> PyResult<Vec<f64>> {
    compare::log_grid(lo, hi, n).map_err(to_py)
}

/// Logarithmic negativity of the global steady state for `k → ∞`.
#[pyfunction]
fn strong_coupling_asymptote(params: &WireParams) -> PyResult<f64> {
    qwire_core::strong_coupling_asymptote(&params.0).map_err(to_py)
}

#[pymodule]
fn qwire(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<WireParams>()?;
    m.add_class::<Covariance>()?;
    m.add_class::<SteadyState>()?;
    m.add_function(wrap_pyfunction!(steady_state, m)?)?;
    m.add_function(wrap_pyfunction!(solve_all, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(log_grid, m)?)?;
    m.add_function(wrap_pyfunction!(strong_coupling_asymptote, m)?)?;
    m.add("PRESETS", qwire_core::cli::PRESET_NAMES.to_vec())?;
    Ok(())
}
