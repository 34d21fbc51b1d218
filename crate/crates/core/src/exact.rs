//! Exact stationary state from the quantum Langevin equations, solved in
//! the frequency domain. Every covariance is a one-dimensional integral over
//! the noise spectrum of both baths filtered through the linear response of
//! the wire.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::compare::{HeatCurrents, Method, SteadyStateResult};
use crate::error::{Error, Result};
use crate::gaussian::CovarianceMatrix;
use crate::model::{normal_modes, secular_validity_margin, spectral_density, WireParams};
use crate::quadrature::{integrate, Tolerance};

/// Below `ZERO_BAND · Λ` the noise kernel is replaced by its `ω → 0` limit.
const ZERO_BAND: f64 = 1e-8;

/// Upper-triangle entries of the covariance, in integration order.
const ENTRIES: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Split point between the finite range and the mapped tail; `None`
    /// means `100 Λ`.
    pub max_omega: Option<f64>,
    /// Maximum number of adaptive subintervals.
    pub limit: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-9,
            abs_tol: 1e-14,
            max_omega: None,
            limit: 4000,
        }
    }
}

impl QuadratureSpec {
    pub fn max_omega(&self, params: &WireParams) -> f64 {
        self.max_omega.unwrap_or(100.0 * params.cutoff)
    }

    pub fn validate(&self, params: &WireParams) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter {
                name: "rel_tol",
                reason: format!("must be > 0, got {}", self.rel_tol),
            });
        }
        if !(self.abs_tol >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "abs_tol",
                reason: format!("must be >= 0, got {}", self.abs_tol),
            });
        }
        if !(self.max_omega(params) > params.cutoff) {
            return Err(Error::InvalidParameter {
                name: "max_omega",
                reason: "must exceed the cutoff".into(),
            });
        }
        Ok(())
    }
}

/// Bath susceptibility `χ̂(ω) = λ²Λ²/(Λ − iω)`.
pub fn chi_hat(omega: f64, params: &WireParams) -> Complex64 {
    let l = params.cutoff;
    Complex64::new(params.lambda_sq * l * l, 0.0) / Complex64::new(l, -omega)
}

/// Linear response of the wire to the bath forces, `A(ω) X̂ = F̂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseMatrix(pub Matrix2<Complex64>);

impl ResponseMatrix {
    /// Diagonal `ω̃² + k − ω² − χ̂(ω)` with `ω̃² = ω_α² + λ²Λ`, written as
    /// `ω_α² + k − ω² + λ²Λ(ω² − iΛω)/(Λ² + ω²)` so the static shift
    /// cancels analytically.
    pub fn at(omega: f64, params: &WireParams) -> Self {
        let l = params.cutoff;
        let w2 = omega * omega;
        let scale = params.lambda_sq * l / (l * l + w2);
        let memory = Complex64::new(scale * w2, -scale * l * omega);
        let diag = |w_node: f64| Complex64::new(w_node * w_node + params.k - w2, 0.0) + memory;
        let off = Complex64::new(-params.k, 0.0);
        ResponseMatrix(Matrix2::new(
            diag(params.omega_c),
            off,
            off,
            diag(params.omega_h),
        ))
    }

    pub fn determinant(&self) -> Complex64 {
        let a = &self.0;
        a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]
    }

    pub fn inverse(&self) -> Option<Matrix2<Complex64>> {
        let det = self.determinant();
        if det.norm() == 0.0 || !det.is_finite() {
            return None;
        }
        let a = &self.0;
        Some(Matrix2::new(a[(1, 1)], -a[(0, 1)], -a[(1, 0)], a[(0, 0)]) / det)
    }
}

/// `J(ω) coth(ω/2T)`, even in ω.
fn noise_kernel(omega: f64, temperature: f64, params: &WireParams) -> f64 {
    let w = omega.abs();
    if w < ZERO_BAND * params.cutoff {
        2.0 * temperature * params.lambda_sq
    } else {
        spectral_density(w, params) / (w / (2.0 * temperature)).tanh()
    }
}

/// Integrand of all ten independent covariances at one frequency, scaled so
/// that `Γ_ij = ∫₀^∞ dω (...)`.
fn integrand(omega: f64, params: &WireParams) -> [f64; 10] {
    let inv = match ResponseMatrix::at(omega, params).inverse() {
        Some(m) => m,
        None => return [f64::NAN; 10],
    };
    let noise = [
        noise_kernel(omega, params.t_c, params),
        noise_kernel(omega, params.t_h, params),
    ];
    // f = 1 for positions, −iω for momenta
    let factor = |q: usize| {
        if q.is_multiple_of(2) {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, -omega)
        }
    };
    let node = |q: usize| q / 2;
    let mut out = [0.0; 10];
    for (slot, &(i, j)) in ENTRIES.iter().enumerate() {
        let f = factor(i) * factor(j).conj();
        let mut acc = Complex64::new(0.0, 0.0);
        for (bath, &s) in noise.iter().enumerate() {
            acc += inv[(node(i), bath)] * inv[(node(j), bath)].conj() * s;
        }
        out[slot] = (f * acc).re / std::f64::consts::PI;
    }
    out
}

/// Real integrand of `Γ_ij` at `omega`, normalised so that integrating it
/// over `[0, ∞)` gives the covariance. Even in `omega`.
pub fn integrand_probe(omega: f64, i: usize, j: usize, params: &WireParams) -> f64 {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    let slot = ENTRIES
        .iter()
        .position(|&e| e == (a, b))
        .expect("indices must be in 0..4");
    integrand(omega, params)[slot]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactSolution {
    pub covariance: CovarianceMatrix,
    /// Quadrature error estimate of every entry.
    pub errors: [[f64; 4]; 4],
    pub intervals: usize,
}

impl ExactSolution {
    pub fn max_error(&self) -> f64 {
        self.errors
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0, |m, &x| m.max(x))
    }
}

/// Frequencies where the integrand has structure; they seed the partition.
pub fn breakpoints(params: &WireParams, max_omega: f64) -> Vec<f64> {
    let m = normal_modes(params);
    let shift = params.lambda_sq * params.cutoff;
    let mut pts = vec![
        0.0,
        m.omega_minus,
        m.omega_plus,
        (params.omega_c.powi(2) + shift).sqrt(),
        (params.omega_h.powi(2) + shift).sqrt(),
        params.cutoff,
        max_omega,
    ];
    pts.retain(|&x| x >= 0.0 && x <= max_omega);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

pub fn exact_solve(params: &WireParams, spec: &QuadratureSpec) -> Result<ExactSolution> {
    params.validate()?;
    spec.validate(params)?;
    let max_omega = spec.max_omega(params);
    let tol = Tolerance {
        rel: spec.rel_tol,
        abs: spec.abs_tol,
        limit: spec.limit,
    };
    let r = integrate(
        |w| integrand(w, params),
        &breakpoints(params, max_omega),
        true,
        &tol,
    )?;
    if r.value.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular("response matrix"));
    }
    let mut g = [[0.0; 4]; 4];
    let mut e = [[0.0; 4]; 4];
    for (slot, &(i, j)) in ENTRIES.iter().enumerate() {
        g[i][j] = r.value[slot];
        g[j][i] = r.value[slot];
        e[i][j] = r.error[slot];
        e[j][i] = r.error[slot];
    }
    Ok(ExactSolution {
        covariance: CovarianceMatrix::from_rows(g),
        errors: e,
        intervals: r.intervals,
    })
}

pub fn exact_covariance(params: &WireParams, spec: &QuadratureSpec) -> Result<CovarianceMatrix> {
    Ok(exact_solve(params, spec)?.covariance)
}

/// Power delivered through the spring, `k⟨P_c X_h⟩ = −k⟨X_c P_h⟩` in the
/// stationary state; the two are averaged.
pub fn exact_heat_current(cov: &CovarianceMatrix, k: f64) -> HeatCurrents {
    HeatCurrents::from_hot(0.5 * k * (cov.get(1, 2) - cov.get(0, 3)))
}

/// Violation of the stationarity conditions `⟨{X_α,P_α}⟩ = 0` and
/// `⟨P_cX_h⟩ + ⟨X_cP_h⟩ = 0`, relative to the largest covariance.
pub fn stationarity_residual(cov: &CovarianceMatrix) -> f64 {
    let worst = cov
        .get(0, 1)
        .abs()
        .max(cov.get(2, 3).abs())
        .max((cov.get(1, 2) + cov.get(0, 3)).abs());
    worst / cov.matrix().amax()
}

pub fn exact_steady_state(params: &WireParams, spec: &QuadratureSpec) -> Result<SteadyStateResult> {
    let sol = exact_solve(params, spec)?;
    Ok(SteadyStateResult::new(
        Method::Exact,
        sol.covariance,
        exact_heat_current(&sol.covariance, params.k),
        secular_validity_margin(params),
        Some(stationarity_residual(&sol.covariance)),
        Some(sol.max_error()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::symplectic_eigenvalues;

    fn fig1a(k: f64) -> WireParams {
        WireParams::new(1.0, 2.0, k, 2.0, 3.0, 1e-3, 1e3).unwrap()
    }

    #[test]
    fn susceptibility_identities() {
        let p = fig1a(0.1);
        let c0 = chi_hat(0.0, &p);
        assert!((c0.re - p.lambda_sq * p.cutoff).abs() < 1e-15 && c0.im == 0.0);
        for w in [1e-3, 0.5, 3.0, 999.0, 1e5] {
            let c = chi_hat(w, &p);
            let j = spectral_density(w, &p);
            assert!((c.im - j).abs() < 1e-15 * j.max(1.0));
        }
        let at_cutoff = chi_hat(p.cutoff, &p);
        assert!((at_cutoff.re - 0.5 * p.lambda_sq * p.cutoff).abs() < 1e-13);
    }

    #[test]
    fn response_matches_shifted_definition() {
        let p = fig1a(0.3);
        let shift = p.lambda_sq * p.cutoff;
        for w in [0.0, 0.7, 1.9, 40.0] {
            let a = ResponseMatrix::at(w, &p).0;
            let direct =
                Complex64::new(p.omega_c.powi(2) + shift + p.k - w * w, 0.0) - chi_hat(w, &p);
            assert!((a[(0, 0)] - direct).norm() < 1e-12);
            let conj = ResponseMatrix::at(-w, &p).0;
            assert!((conj[(1, 1)] - a[(1, 1)].conj()).norm() < 1e-15);
            assert_eq!(a[(0, 1)], Complex64::new(-p.k, 0.0));
        }
    }

    #[test]
    fn probe_is_even_with_finite_origin() {
        let p = fig1a(0.05);
        for (i, j) in [(0, 0), (1, 1), (0, 3), (1, 2), (2, 2), (1, 3)] {
            for w in [0.3, 1.0, 2.5, 700.0] {
                let a = integrand_probe(w, i, j, &p);
                let b = integrand_probe(-w, i, j, &p);
                assert!((a - b).abs() <= 1e-15 * a.abs().max(1e-300), "{i}{j} {w}");
            }
        }
        // ω → 0: only position entries survive, with the noise weight 2Tλ²
        let at0 = integrand_probe(0.0, 0, 0, &p);
        let near = integrand_probe(1e-9, 0, 0, &p);
        assert!((at0 - near).abs() < 1e-8 * at0.abs());
        assert_eq!(integrand_probe(0.0, 1, 1, &p), 0.0);
        assert_eq!(integrand_probe(0.7, 0, 1, &p), 0.0);
        assert_eq!(integrand_probe(0.7, 2, 3, &p), 0.0);
    }

    #[test]
    fn equilibrium_decoupled_nodes() {
        let p = WireParams::new(1.0, 2.0, 0.0, 1.5, 1.5, 1e-3, 1e3).unwrap();
        let sol = exact_solve(&p, &QuadratureSpec::default()).unwrap();
        let g = sol.covariance;
        for (node, w) in [(0usize, 1.0f64), (2, 2.0)] {
            let n = 1.0 / (w / 1.5f64).exp_m1();
            assert!((g.get(node, node) - (n + 0.5) / w).abs() < 5e-3);
            assert!(g.get(node, node + 1).abs() < 1e-12);
        }
        assert_eq!(g.get(0, 2), 0.0);
        assert_eq!(g.get(1, 3), 0.0);
        assert_eq!(exact_heat_current(&g, p.k).hot, 0.0);
    }

    #[test]
    fn stationary_cross_moments_balance() {
        let p = fig1a(0.01);
        let sol = exact_solve(&p, &QuadratureSpec::default()).unwrap();
        let g = sol.covariance;
        // d⟨X_cX_h⟩/dt = ⟨P_cX_h⟩ + ⟨X_cP_h⟩ = 0
        assert!((g.get(1, 2) + g.get(0, 3)).abs() < 1e-12);
        assert!(g.get(0, 1).abs() < 1e-15 && g.get(2, 3).abs() < 1e-15);
        assert!(symplectic_eigenvalues(&g).is_ok());
        let q = exact_heat_current(&g, p.k);
        assert!(q.hot > 0.0);
        assert!(sol.max_error() < 1e-8);
    }
}
