//! Runs the four solvers side by side and tabulates how far each
//! approximation lands from the exact steady state.

use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{exact_steady_state, QuadratureSpec};
use crate::gaussian::{symplectic_spectrum, CorrelationReport, CovarianceMatrix, DiscordOptions};
use crate::gme::gme_steady_state;
use crate::lme::lme_steady_state;
use crate::model::{secular_validity_margin, Bath, WireParams};
use crate::redfield::redfield_steady_state;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Global,
    Local,
    Redfield,
    Exact,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Global,
        Method::Local,
        Method::Redfield,
        Method::Exact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Global => "global",
            Method::Local => "local",
            Method::Redfield => "redfield",
            Method::Exact => "exact",
        }
    }

    /// How far below 1/2 the smallest symplectic eigenvalue may fall.
    /// The Redfield equation is not completely positive, so it gets slack.
    pub fn physicality_tol(self) -> f64 {
        match self {
            Method::Redfield => 1e-6,
            _ => crate::gaussian::PHYSICALITY_TOL,
        }
    }
}

/// Stationary heat currents flowing from each bath into the wire.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatCurrents {
    pub cold: f64,
    pub hot: f64,
}

impl HeatCurrents {
    pub fn from_hot(hot: f64) -> Self {
        HeatCurrents { cold: -hot, hot }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub secular_margin: f64,
    /// Relative residual of the linear steady-state solve.
    pub residual: Option<f64>,
    /// Largest quadrature error estimate over all covariance entries.
    pub quadrature_error: Option<f64>,
    pub min_symplectic_eigenvalue: f64,
    pub physical: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteadyStateResult {
    pub method: Method,
    pub covariance: CovarianceMatrix,
    pub heat_currents: HeatCurrents,
    pub diagnostics: Diagnostics,
}

impl SteadyStateResult {
    pub(crate) fn new(
        method: Method,
        covariance: CovarianceMatrix,
        heat_currents: HeatCurrents,
        secular_margin: f64,
        residual: Option<f64>,
        quadrature_error: Option<f64>,
    ) -> Self {
        let (_, nu) = symplectic_spectrum(&covariance);
        SteadyStateResult {
            method,
            covariance,
            heat_currents,
            diagnostics: Diagnostics {
                secular_margin,
                residual,
                quadrature_error,
                min_symplectic_eigenvalue: nu,
                physical: nu >= 0.5 - method.physicality_tol(),
            },
        }
    }
}

/// Outcome of one solver; a failure does not abort the other methods.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodOutcome {
    pub method: Method,
    pub result: Result<SteadyStateResult>,
}

pub fn solve_method(
    method: Method,
    params: &WireParams,
    spec: &QuadratureSpec,
) -> Result<SteadyStateResult> {
    match method {
        Method::Global => gme_steady_state(params),
        Method::Local => lme_steady_state(params),
        Method::Redfield => redfield_steady_state(params),
        Method::Exact => exact_steady_state(params, spec),
    }
}

/// All four methods in the order global, local, redfield, exact. Fails only
/// when the exact solver does.
pub fn solve_all(params: &WireParams, spec: &QuadratureSpec) -> Result<Vec<MethodOutcome>> {
    params.validate()?;
    let out: Vec<MethodOutcome> = Method::ALL
        .iter()
        .map(|&method| MethodOutcome {
            method,
            result: solve_method(method, params, spec),
        })
        .collect();
    if let Err(e) = &out[3].result {
        return Err(e.clone());
    }
    Ok(out)
}

/// Swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    K,
    TC,
    TH,
    OmegaH,
    LambdaSq,
}

impl Axis {
    pub const ALL: [Axis; 5] = [Axis::K, Axis::TC, Axis::TH, Axis::OmegaH, Axis::LambdaSq];

    pub fn name(self) -> &'static str {
        match self {
            Axis::K => "k",
            Axis::TC => "t_c",
            Axis::TH => "t_h",
            Axis::OmegaH => "omega_h",
            Axis::LambdaSq => "lambda_sq",
        }
    }

    pub fn apply(self, base: &WireParams, value: f64) -> Result<WireParams> {
        let mut p = *base;
        match self {
            Axis::K => p.k = value,
            Axis::TC => p.t_c = value,
            Axis::TH => p.t_h = value,
            Axis::OmegaH => p.omega_h = value,
            Axis::LambdaSq => p.lambda_sq = value,
        }
        p.validate()?;
        Ok(p)
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Axis::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParameter {
                name: "axis",
                reason: format!("expected one of k, t_c, t_h, omega_h, lambda_sq; got `{s}`"),
            })
    }
}

/// Figures of one method at one sweep point. Every field is NaN when the
/// method failed there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MethodRow {
    pub fidelity_to_exact: f64,
    pub qdot_h: f64,
    pub mutual_info: f64,
    pub discord: f64,
    pub classical: f64,
    pub log_neg: f64,
}

impl MethodRow {
    pub const NAN: MethodRow = MethodRow {
        fidelity_to_exact: f64::NAN,
        qdot_h: f64::NAN,
        mutual_info: f64::NAN,
        discord: f64::NAN,
        classical: f64::NAN,
        log_neg: f64::NAN,
    };

    fn from_result(
        result: &SteadyStateResult,
        exact: &CovarianceMatrix,
        options: &SweepOptions,
    ) -> Result<Self> {
        let c = CorrelationReport::compute(
            &result.covariance,
            exact,
            options.measured,
            &options.discord,
        )?;
        Ok(MethodRow {
            fidelity_to_exact: c.fidelity_to_exact,
            qdot_h: result.heat_currents.hot,
            mutual_info: c.mutual_information,
            discord: c.discord_arrow,
            classical: c.classical_arrow,
            log_neg: c.log_negativity,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// Value of the swept parameter.
    pub value: f64,
    pub secular_margin: f64,
    /// Indexed like `Method::ALL`.
    pub methods: [MethodRow; 4],
    /// Largest quadrature error estimate of the exact covariance.
    pub quadrature_error: f64,
    /// Relative tolerance the exact covariance was computed with.
    pub quadrature_rel_tol: f64,
    /// Methods that failed at this point, with the reason.
    pub failures: Vec<(Method, String)>,
}

impl SweepRow {
    pub fn method(&self, method: Method) -> &MethodRow {
        &self.methods[Method::ALL
            .iter()
            .position(|&m| m == method)
            .expect("listed")]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub quadrature: QuadratureSpec,
    pub discord: DiscordOptions,
    /// Node on which the discord measurement is performed.
    pub measured: Bath,
    /// Worker threads; `None` uses the available parallelism.
    pub jobs: Option<usize>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            quadrature: QuadratureSpec::default(),
            discord: DiscordOptions::default(),
            measured: Bath::Hot,
            jobs: None,
        }
    }
}

/// One sweep point. Fails only if the parameters are invalid or the exact
/// solver fails.
pub fn sweep_row(params: &WireParams, value: f64, options: &SweepOptions) -> Result<SweepRow> {
    let outcomes = solve_all(params, &options.quadrature)?;
    let exact = outcomes[3].result.as_ref().map_err(Clone::clone)?;
    let mut methods = [MethodRow::NAN; 4];
    let mut failures = Vec::new();
    for (slot, outcome) in outcomes.iter().enumerate() {
        let row = outcome
            .result
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|r| MethodRow::from_result(r, &exact.covariance, options));
        match row {
            Ok(r) => methods[slot] = r,
            Err(e) => failures.push((outcome.method, e.to_string())),
        }
    }
    Ok(SweepRow {
        value,
        secular_margin: secular_validity_margin(params),
        methods,
        quadrature_error: exact.diagnostics.quadrature_error.unwrap_or(0.0),
        quadrature_rel_tol: options.quadrature.rel_tol,
        failures,
    })
}

/// Evaluates every grid point; rows come back in grid order whatever the
/// number of workers.
pub fn sweep(
    base: &WireParams,
    axis: Axis,
    grid: &[f64],
    options: &SweepOptions,
) -> Result<Vec<Result<SweepRow>>> {
    let row = |&v: &f64| axis.apply(base, v).and_then(|p| sweep_row(&p, v, options));
    let threads = options.jobs.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParameter {
            name: "jobs",
            reason: e.to_string(),
        })?;
    Ok(pool.install(|| grid.par_iter().map(row).collect()))
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && lo.is_finite() && hi.is_finite()) || n == 0 {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: format!("need 0 < lo <= hi and n >= 1, got {lo}:{hi}:{n}"),
        });
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.log10(), hi.log10());
    Ok((0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64)
            }
        })
        .collect())
}

/// Approximate-minus-exact correlation figures of one method.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationDeltas {
    pub method: Method,
    pub mutual_info: f64,
    pub classical: f64,
    pub discord: f64,
    /// `⟨X_c P_h⟩` difference.
    pub gamma_14: f64,
    /// `⟨X_c X_h⟩` difference.
    pub gamma_13: f64,
}

/// Deltas for the global, local and Redfield methods against the exact state.
pub fn correlation_deltas(
    params: &WireParams,
    options: &SweepOptions,
) -> Result<Vec<CorrelationDeltas>> {
    let outcomes = solve_all(params, &options.quadrature)?;
    let exact = outcomes[3]
        .result
        .as_ref()
        .map_err(Clone::clone)?
        .covariance;
    let reference = CorrelationReport::compute(&exact, &exact, options.measured, &options.discord)?;
    outcomes[..3]
        .iter()
        .map(|o| {
            let r = o.result.as_ref().map_err(Clone::clone)?;
            let c = CorrelationReport::compute(
                &r.covariance,
                &exact,
                options.measured,
                &options.discord,
            )?;
            let mutual_info = c.mutual_information - reference.mutual_information;
            let classical = c.classical_arrow - reference.classical_arrow;
            Ok(CorrelationDeltas {
                method: o.method,
                mutual_info,
                classical,
                discord: mutual_info - classical,
                gamma_14: r.covariance.get(0, 3) - exact.get(0, 3),
                gamma_13: r.covariance.get(0, 2) - exact.get(0, 2),
            })
        })
        .collect()
}

/// Largest element-wise relative deviation of `approx` from `exact`.
/// Entries that vanish in `exact` are measured against its largest entry.
pub fn relative_discrepancy(approx: &CovarianceMatrix, exact: &CovarianceMatrix) -> f64 {
    let scale = exact.matrix().amax();
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in i..4 {
            let e = exact.get(i, j);
            let d = (approx.get(i, j) - e).abs();
            worst = worst.max(if e == 0.0 { d / scale } else { d / e.abs() });
        }
    }
    worst
}

/// Relative bound on the stationarity residual of every solver.
pub const RESIDUAL_TOL: f64 = 1e-11;

/// Relative bound on `Q̇_c + Q̇_h`.
pub const BALANCE_TOL: f64 = 1e-10;

/// Current scale below which the balance of the two currents is limited by
/// cancellation between dissipator terms of size `λ² max(T, ω)`.
pub fn current_floor(params: &WireParams) -> f64 {
    let scale = params
        .t_c
        .max(params.t_h)
        .max(params.omega_c)
        .max(params.omega_h);
    1e-3 * params.lambda_sq * scale
}

/// Whether the two currents cancel to `BALANCE_TOL · max(|Q̇_h|, floor)`.
pub fn currents_balance(q: &HeatCurrents, params: &WireParams) -> (f64, f64, bool) {
    let imbalance = (q.cold + q.hot).abs();
    let bound = BALANCE_TOL * q.hot.abs().max(current_floor(params));
    (imbalance, bound, imbalance <= bound)
}

/// One invariant evaluated at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: &'static str,
    pub method: Method,
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
    /// Failing this check means a non-physical state.
    pub physicality: bool,
}

fn check(name: &'static str, method: Method, value: f64, bound: f64, passed: bool) -> Check {
    Check {
        name,
        method,
        value,
        bound,
        passed,
        physicality: false,
    }
}

/// Runs every solver and evaluates its invariants: physical covariance,
/// stationarity of the solution, zero net current, and the second law for
/// the thermodynamically consistent methods.
pub fn validate(params: &WireParams, spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let outcomes = solve_all(params, spec)?;
    let mut checks = Vec::new();
    for o in &outcomes {
        let r = match &o.result {
            Ok(r) => r,
            Err(_) => {
                checks.push(check("solved", o.method, f64::NAN, f64::NAN, false));
                continue;
            }
        };
        let d = &r.diagnostics;
        let floor = 0.5 - o.method.physicality_tol();
        checks.push(Check {
            physicality: true,
            ..check(
                "physical",
                o.method,
                d.min_symplectic_eigenvalue,
                floor,
                d.physical,
            )
        });
        let residual = d.residual.unwrap_or(0.0);
        checks.push(check(
            "stationarity",
            o.method,
            residual,
            RESIDUAL_TOL,
            residual <= RESIDUAL_TOL,
        ));
        let q = r.heat_currents;
        let (imbalance, bound, ok) = currents_balance(&q, params);
        checks.push(check("current_balance", o.method, imbalance, bound, ok));
        if params.t_h >= params.t_c && matches!(o.method, Method::Global | Method::Exact) {
            let slack = params.k * d.quadrature_error.unwrap_or(0.0);
            checks.push(check(
                "second_law",
                o.method,
                q.hot,
                -slack,
                q.hot >= -slack,
            ));
        }
    }
    Ok(checks)
}
