//! Partial Markovian Redfield equation. On top of the secular mode
//! populations it keeps the slow cross-mode channel oscillating at
//! `Ω₊ − Ω₋`, which the secular approximation wrongly discards when the two
//! normal modes are nearly degenerate.
//!
//! Variables: `y = (⟨n₊⟩, ⟨n₋⟩, ⟨d₊₋⟩, ⟨s₊₋⟩)`, obeying `dy/dt = B y + b`.
//! All other quadratic mode averages relax to zero.

use nalgebra::{Matrix4, Vector4};

use crate::compare::{HeatCurrents, Method, SteadyStateResult};
use crate::error::{Error, Result};
use crate::gaussian::CovarianceMatrix;
use crate::gme::{gme_coefficients, GmeCoefficients, Mode};
use crate::model::{decay_rate, rotation_matrix, secular_validity_margin, Bath, WireParams};

/// Permutes `(η₋, Π₋, η₊, Π₊)` into `(η₊, Π₊, η₋, Π₋)`; its own inverse.
#[rustfmt::skip]
pub const MODE_ORDER_SWAP: [[f64; 4]; 4] = [
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RedfieldSystem {
    pub b_mat: Matrix4<f64>,
    pub b_vec: Vector4<f64>,
}

impl RedfieldSystem {
    pub fn rate(&self, y: &Vector4<f64>) -> Vector4<f64> {
        self.b_mat * y + self.b_vec
    }

    /// The same system with the cross-mode channel cut off, which leaves the
    /// secular population dynamics.
    pub fn secular_part(&self) -> RedfieldSystem {
        let mut s = *self;
        for (i, j) in [(0, 3), (1, 3), (3, 0), (3, 1)] {
            s.b_mat[(i, j)] = 0.0;
        }
        s.b_vec[3] = 0.0;
        s
    }
}

/// Rate weights `sinϑ cosϑ γ_α(±Ω)/(2Ω)`. These are the tanϑ- or
/// cotϑ-weighted global rates written so that nothing diverges when one of
/// the mixing weights vanishes.
struct Mixed {
    sc: f64,
    omega_plus: f64,
    omega_minus: f64,
}

impl Mixed {
    fn rate(&self, params: &WireParams, bath: Bath, mode: Mode, sign: f64) -> Result<f64> {
        let w = match mode {
            Mode::Plus => self.omega_plus,
            Mode::Minus => self.omega_minus,
        };
        Ok(self.sc * decay_rate(sign * w, params.temperature(bath), params)? / (2.0 * w))
    }
}

struct Parts {
    coeffs: GmeCoefficients,
    mixed: Mixed,
}

fn parts(params: &WireParams) -> Result<Parts> {
    let coeffs = gme_coefficients(params)?;
    let m = coeffs.modes;
    Ok(Parts {
        mixed: Mixed {
            sc: m.sin_cos(),
            omega_plus: m.omega_plus,
            omega_minus: m.omega_minus,
        },
        coeffs,
    })
}

pub fn redfield_system(params: &WireParams) -> Result<RedfieldSystem> {
    let Parts { coeffs, mixed } = parts(params)?;
    let (op, om) = (mixed.omega_plus, mixed.omega_minus);
    let v = |bath, mode, sign| mixed.rate(params, bath, mode, sign);
    let absorb = |mode| -> f64 {
        Bath::BOTH
            .iter()
            .map(|&b| coeffs.rates(mode, b).absorption)
            .sum()
    };

    let mut b_vec = Vector4::zeros();
    b_vec[0] = absorb(Mode::Plus);
    b_vec[1] = absorb(Mode::Minus);
    b_vec[3] = (op / om).sqrt()
        * (v(Bath::Cold, Mode::Plus, -1.0)? - v(Bath::Hot, Mode::Plus, -1.0)?)
        + (om / op).sqrt() * (v(Bath::Cold, Mode::Minus, -1.0)? - v(Bath::Hot, Mode::Minus, -1.0)?);

    // drift difference W_{−Ω} − W_{+Ω} in mixed weighting
    let drift = |bath, mode| -> Result<f64> { Ok(v(bath, mode, -1.0)? - v(bath, mode, 1.0)?) };

    let mut b_mat = Matrix4::zeros();
    b_mat[(0, 0)] = coeffs.delta_total(Mode::Plus);
    b_mat[(1, 1)] = coeffs.delta_total(Mode::Minus);
    b_mat[(0, 3)] =
        0.5 * (om / op).sqrt() * (drift(Bath::Cold, Mode::Minus)? - drift(Bath::Hot, Mode::Minus)?);
    b_mat[(3, 1)] = 2.0 * b_mat[(0, 3)];
    b_mat[(1, 3)] =
        0.5 * (op / om).sqrt() * (drift(Bath::Cold, Mode::Plus)? - drift(Bath::Hot, Mode::Plus)?);
    b_mat[(3, 0)] = 2.0 * b_mat[(1, 3)];
    let mean = 0.5 * (b_mat[(0, 0)] + b_mat[(1, 1)]);
    b_mat[(2, 2)] = mean;
    b_mat[(3, 3)] = mean;
    b_mat[(2, 3)] = om - op;
    b_mat[(3, 2)] = op - om;
    Ok(RedfieldSystem { b_mat, b_vec })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RedfieldVariables {
    pub n_plus: f64,
    pub n_minus: f64,
    pub d: f64,
    pub s: f64,
}

impl RedfieldVariables {
    pub fn from_vector(y: &Vector4<f64>) -> Self {
        RedfieldVariables {
            n_plus: y[0],
            n_minus: y[1],
            d: y[2],
            s: y[3],
        }
    }

    pub fn to_vector(&self) -> Vector4<f64> {
        Vector4::new(self.n_plus, self.n_minus, self.d, self.s)
    }

    /// Covariance in the mode ordering `(η₋, Π₋, η₊, Π₊)`.
    pub fn mode_covariance(&self, omega_plus: f64, omega_minus: f64) -> Matrix4<f64> {
        let (op, om) = (omega_plus, omega_minus);
        let root = (op * om).sqrt();
        let mut g = Matrix4::zeros();
        g[(0, 0)] = (0.5 + self.n_minus) / om;
        g[(1, 1)] = om * (0.5 + self.n_minus);
        g[(2, 2)] = (0.5 + self.n_plus) / op;
        g[(3, 3)] = op * (0.5 + self.n_plus);
        g[(0, 2)] = self.s / (2.0 * root);
        g[(1, 3)] = 0.5 * root * self.s;
        // ⟨η₋Π₊⟩ and ⟨Π₋η₊⟩
        g[(0, 3)] = 0.5 * (op / om).sqrt() * self.d;
        g[(1, 2)] = -0.5 * (om / op).sqrt() * self.d;
        for i in 0..4 {
            for j in 0..i {
                g[(i, j)] = g[(j, i)];
            }
        }
        g
    }

    /// Covariance in local quadratures `(X_c, P_c, X_h, P_h)`.
    pub fn to_covariance(&self, params: &WireParams) -> CovarianceMatrix {
        let m = crate::model::normal_modes(params);
        let g = self.mode_covariance(m.omega_plus, m.omega_minus);
        let p = Matrix4::from_fn(|i, j| MODE_ORDER_SWAP[i][j]);
        let r = rotation_matrix(m.theta);
        CovarianceMatrix::from_matrix(r * p * g * p.transpose() * r.transpose())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RedfieldSolution {
    pub system: RedfieldSystem,
    pub variables: RedfieldVariables,
    pub covariance: CovarianceMatrix,
    /// `|B y + b| / |b|`.
    pub residual: f64,
    pub heat_currents: HeatCurrents,
}

pub fn solve_system(system: &RedfieldSystem) -> Result<Vector4<f64>> {
    let y = system
        .b_mat
        .lu()
        .solve(&(-system.b_vec))
        .ok_or(Error::Singular("partial Redfield equation"))?;
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular("partial Redfield equation"));
    }
    Ok(y)
}

pub fn redfield_solve(params: &WireParams) -> Result<RedfieldSolution> {
    params.validate()?;
    let system = redfield_system(params)?;
    let y = solve_system(&system)?;
    let variables = RedfieldVariables::from_vector(&y);
    Ok(RedfieldSolution {
        system,
        variables,
        covariance: variables.to_covariance(params),
        residual: system.rate(&y).norm() / system.b_vec.norm(),
        heat_currents: heat_current_from_variables(params, &variables)?,
    })
}

pub fn redfield_steady_state(params: &WireParams) -> Result<SteadyStateResult> {
    let sol = redfield_solve(params)?;
    Ok(SteadyStateResult::new(
        Method::Redfield,
        sol.covariance,
        sol.heat_currents,
        secular_validity_margin(params),
        Some(sol.residual),
        None,
    ))
}

pub fn redfield_heat_current(params: &WireParams) -> Result<HeatCurrents> {
    Ok(redfield_solve(params)?.heat_currents)
}

/// Energy flow into the cold bath, which in the stationary state equals the
/// current entering from the hot bath.
fn heat_current_from_variables(params: &WireParams, y: &RedfieldVariables) -> Result<HeatCurrents> {
    let Parts { coeffs, mixed } = parts(params)?;
    let (op, om) = (mixed.omega_plus, mixed.omega_minus);
    let v = |mode, sign| mixed.rate(params, Bath::Cold, mode, sign);
    let cp = coeffs.rates(Mode::Plus, Bath::Cold);
    let cm = coeffs.rates(Mode::Minus, Bath::Cold);
    let populations = op * (cp.emission * y.n_plus - cp.absorption * (1.0 + y.n_plus))
        + om * (cm.emission * y.n_minus - cm.absorption * (1.0 + y.n_minus));
    let coherence = 0.5
        * (op * om).sqrt()
        * y.s
        * ((v(Mode::Minus, 1.0)? - v(Mode::Minus, -1.0)?)
            + (v(Mode::Plus, 1.0)? - v(Mode::Plus, -1.0)?));
    Ok(HeatCurrents::from_hot(populations + coherence))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::fidelity;
    use crate::gme::gme_solve;

    fn params(wh: f64, k: f64, tc: f64, th: f64) -> WireParams {
        WireParams::new(1.0, wh, k, tc, th, 1e-3, 1e3).unwrap()
    }

    fn fig1b(k: f64) -> WireParams {
        params((1.0f64 + 2e-6).sqrt(), k, 2.0, 3.0)
    }

    #[test]
    fn swap_is_an_involution() {
        let p = Matrix4::from_fn(|i, j| MODE_ORDER_SWAP[i][j]);
        assert_eq!(p * p, Matrix4::identity());
        // (η₋, Π₋, η₊, Π₊) = (0, 1, 2, 3) lands at (2, 3, 0, 1)
        let v = p * Vector4::new(0.0, 1.0, 2.0, 3.0);
        assert_eq!(v, Vector4::new(2.0, 3.0, 0.0, 1.0));
    }

    #[test]
    fn equilibrium_populations() {
        let p = params(1.4, 0.3, 1.7, 1.7);
        let sol = redfield_solve(&p).unwrap();
        let m = crate::model::normal_modes(&p);
        let n = |w: f64| 1.0 / (w / 1.7f64).exp_m1();
        let y = sol.variables;
        assert!((y.n_plus - n(m.omega_plus)).abs() < 1e-12);
        assert!((y.n_minus - n(m.omega_minus)).abs() < 1e-12);
        assert!(y.d.abs() < 1e-14 && y.s.abs() < 1e-14);
        assert!(sol.heat_currents.hot.abs() < 1e-17);
    }

    #[test]
    fn secular_regime_reduces_to_global() {
        // the cross-mode correction to the current scales as (λ²/(Ω₊ − Ω₋))²
        let p = WireParams::new(1.0, 2.0, 0.3, 2.0, 3.0, 1e-4, 1e3).unwrap();
        let sol = redfield_solve(&p).unwrap();
        let g = gme_solve(&p).unwrap();
        let f = fidelity(&sol.covariance, &g.result_covariance).unwrap();
        assert!(1.0 - f < 1e-6, "{}", 1.0 - f);
        let qg = g.heat_currents.hot;
        assert!((sol.heat_currents.hot - qg).abs() < 1e-6 * qg.abs());
        assert!(sol.variables.d.abs() < 1e-3 && sol.variables.s.abs() < 1e-3);
    }

    #[test]
    fn secular_part_reproduces_global_populations() {
        let p = fig1b(1e-4);
        let sys = redfield_system(&p).unwrap().secular_part();
        let y = RedfieldVariables::from_vector(&solve_system(&sys).unwrap());
        assert_eq!(y.d, 0.0);
        assert_eq!(y.s, 0.0);
        let g = gme_solve(&p).unwrap();
        let cov = y.to_covariance(&p);
        assert!((cov.matrix() - g.result_covariance.matrix()).amax() < 1e-12);
    }

    #[test]
    fn cross_entries_are_tied_by_d() {
        let p = fig1b(1e-4);
        let sol = redfield_solve(&p).unwrap();
        let m = crate::model::normal_modes(&p);
        let g = sol.variables.mode_covariance(m.omega_plus, m.omega_minus);
        let ratio = m.omega_plus / m.omega_minus;
        assert!(sol.variables.d.abs() > 1e-6);
        assert!((g[(0, 3)] + g[(1, 2)] * ratio).abs() < 1e-15 * g[(0, 3)].abs().max(1e-300));
    }

    #[test]
    fn finite_without_coupling() {
        let p = params(2.0, 0.0, 2.0, 3.0);
        let sol = redfield_solve(&p).unwrap();
        assert!(sol.covariance.matrix().iter().all(|x| x.is_finite()));
        assert!(sol.heat_currents.hot.abs() < 1e-30);
        let g = gme_solve(&p).unwrap();
        assert!((sol.covariance.matrix() - g.result_covariance.matrix()).amax() < 1e-12);
    }

    #[test]
    fn quasi_resonant_is_fixed_point() {
        for k in [1e-5, 1e-4, 1e-3] {
            let sol = redfield_solve(&fig1b(k)).unwrap();
            assert!(sol.residual < 1e-11, "{}", sol.residual);
            assert!(sol.variables.n_plus > 0.0 && sol.variables.n_minus > 0.0);
        }
    }
}
