//! Global master equation: dissipation derived in the normal-mode basis of
//! the coupled wire, followed by the secular approximation. The two normal
//! modes then relax independently, each towards its own stationary state.

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::compare::{HeatCurrents, Method, SteadyStateResult};
use crate::error::Result;
use crate::gaussian::CovarianceMatrix;
use crate::model::{
    decay_rate, normal_modes, rotation_matrix, secular_validity_margin, Bath, NormalModes,
    WireParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Plus,
    Minus,
}

impl Mode {
    pub const BOTH: [Mode; 2] = [Mode::Plus, Mode::Minus];

    fn index(self) -> usize {
        match self {
            Mode::Plus => 0,
            Mode::Minus => 1,
        }
    }
}

fn bath_index(bath: Bath) -> usize {
    match bath {
        Bath::Cold => 0,
        Bath::Hot => 1,
    }
}

/// Transition rates of one normal mode induced by one bath.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeRates {
    /// `W_{+Ω}`: the mode gives a quantum to the bath.
    pub emission: f64,
    /// `W_{−Ω}`: the mode takes a quantum from the bath.
    pub absorption: f64,
}

impl ModeRates {
    /// Drift `Δ = W_{−Ω} − W_{+Ω}`.
    pub fn delta(&self) -> f64 {
        self.absorption - self.emission
    }

    /// Diffusion `Σ = W_{−Ω} + W_{+Ω}`.
    pub fn sigma(&self) -> f64 {
        self.absorption + self.emission
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GmeCoefficients {
    pub modes: NormalModes,
    /// Indexed `[mode][bath]`.
    pub rates: [[ModeRates; 2]; 2],
}

impl GmeCoefficients {
    pub fn rates(&self, mode: Mode, bath: Bath) -> ModeRates {
        self.rates[mode.index()][bath_index(bath)]
    }

    pub fn delta(&self, mode: Mode, bath: Bath) -> f64 {
        self.rates(mode, bath).delta()
    }

    pub fn sigma(&self, mode: Mode, bath: Bath) -> f64 {
        self.rates(mode, bath).sigma()
    }

    pub fn delta_total(&self, mode: Mode) -> f64 {
        Bath::BOTH.iter().map(|&b| self.delta(mode, b)).sum()
    }

    pub fn sigma_total(&self, mode: Mode) -> f64 {
        Bath::BOTH.iter().map(|&b| self.sigma(mode, b)).sum()
    }

    pub fn frequency(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Plus => self.modes.omega_plus,
            Mode::Minus => self.modes.omega_minus,
        }
    }
}

pub fn gme_coefficients(params: &WireParams) -> Result<GmeCoefficients> {
    let modes = normal_modes(params);
    let (c2, s2) = (modes.cos_sq(), modes.sin_sq());
    let mut rates = [[ModeRates {
        emission: 0.0,
        absorption: 0.0,
    }; 2]; 2];
    for mode in Mode::BOTH {
        let omega = match mode {
            Mode::Plus => modes.omega_plus,
            Mode::Minus => modes.omega_minus,
        };
        for bath in Bath::BOTH {
            // η₊ carries X_c with weight cosϑ, η₋ with sinϑ
            let weight = match (mode, bath) {
                (Mode::Plus, Bath::Cold) | (Mode::Minus, Bath::Hot) => c2,
                (Mode::Plus, Bath::Hot) | (Mode::Minus, Bath::Cold) => s2,
            };
            let t = params.temperature(bath);
            rates[mode.index()][bath_index(bath)] = ModeRates {
                emission: weight * decay_rate(omega, t, params)? / (2.0 * omega),
                absorption: weight * decay_rate(-omega, t, params)? / (2.0 * omega),
            };
        }
    }
    Ok(GmeCoefficients { modes, rates })
}

/// Second moments of the two normal modes. Cross-mode moments are not
/// generated by the secular dynamics and stay zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalModeState {
    /// `⟨η²⟩` indexed by mode.
    pub eta_sq: [f64; 2],
    /// `⟨Π²⟩`.
    pub pi_sq: [f64; 2],
    /// `⟨{η, Π}⟩`.
    pub anti: [f64; 2],
}

impl NormalModeState {
    pub fn eta_sq(&self, mode: Mode) -> f64 {
        self.eta_sq[mode.index()]
    }

    pub fn pi_sq(&self, mode: Mode) -> f64 {
        self.pi_sq[mode.index()]
    }

    pub fn anti(&self, mode: Mode) -> f64 {
        self.anti[mode.index()]
    }

    /// Covariance in local quadratures `(X_c, P_c, X_h, P_h)`.
    pub fn to_covariance(&self, modes: &NormalModes) -> CovarianceMatrix {
        let mut g = Matrix4::zeros();
        for m in 0..2 {
            let o = 2 * m;
            g[(o, o)] = self.eta_sq[m];
            g[(o + 1, o + 1)] = self.pi_sq[m];
            g[(o, o + 1)] = 0.5 * self.anti[m];
            g[(o + 1, o)] = 0.5 * self.anti[m];
        }
        let r = rotation_matrix(modes.theta);
        CovarianceMatrix::from_matrix(r * g * r.transpose())
    }

    fn map(self, other: NormalModeState, f: impl Fn(f64, f64) -> f64) -> NormalModeState {
        let zip = |a: [f64; 2], b: [f64; 2]| [f(a[0], b[0]), f(a[1], b[1])];
        NormalModeState {
            eta_sq: zip(self.eta_sq, other.eta_sq),
            pi_sq: zip(self.pi_sq, other.pi_sq),
            anti: zip(self.anti, other.anti),
        }
    }

    /// `self + h · rate`.
    pub fn advance(self, rate: NormalModeState, h: f64) -> NormalModeState {
        self.map(rate, |x, r| x + h * r)
    }
}

/// Time derivative of the normal-mode second moments.
pub fn gme_dynamics(state: &NormalModeState, coeffs: &GmeCoefficients) -> NormalModeState {
    let mut d = NormalModeState {
        eta_sq: [0.0; 2],
        pi_sq: [0.0; 2],
        anti: [0.0; 2],
    };
    for mode in Mode::BOTH {
        let m = mode.index();
        let w = coeffs.frequency(mode);
        let delta = coeffs.delta_total(mode);
        let sigma = coeffs.sigma_total(mode);
        let (x, p, a) = (state.eta_sq[m], state.pi_sq[m], state.anti[m]);
        d.eta_sq[m] = delta * x + a + sigma / (2.0 * w);
        d.anti[m] = 2.0 * p - 2.0 * w * w * x + delta * a;
        d.pi_sq[m] = delta * p - w * w * a + w * sigma / 2.0;
    }
    d
}

pub fn gme_stationary_modes(coeffs: &GmeCoefficients) -> NormalModeState {
    let mut s = NormalModeState {
        eta_sq: [0.0; 2],
        pi_sq: [0.0; 2],
        anti: [0.0; 2],
    };
    for mode in Mode::BOTH {
        let m = mode.index();
        let w = coeffs.frequency(mode);
        let ratio = -coeffs.sigma_total(mode) / (2.0 * coeffs.delta_total(mode));
        s.eta_sq[m] = ratio / w;
        s.pi_sq[m] = ratio * w;
    }
    s
}

/// Incoming heat currents evaluated on an arbitrary normal-mode state.
pub fn heat_currents_from_state(state: &NormalModeState, coeffs: &GmeCoefficients) -> HeatCurrents {
    let current = |bath: Bath| -> f64 {
        0.5 * Mode::BOTH
            .iter()
            .map(|&mode| {
                let w = coeffs.frequency(mode);
                coeffs.delta(mode, bath) * (w * w * state.eta_sq(mode) + state.pi_sq(mode))
                    + w * coeffs.sigma(mode, bath)
            })
            .sum::<f64>()
    };
    HeatCurrents {
        cold: current(Bath::Cold),
        hot: current(Bath::Hot),
    }
}

/// Stationary heat currents in the closed form where each mode carries
/// `Ω W^c W^h (e^{−Ω/T_h} − e^{−Ω/T_c}) / (−Δ)` from hot to cold.
pub fn gme_heat_currents(params: &WireParams) -> Result<HeatCurrents> {
    let coeffs = gme_coefficients(params)?;
    Ok(closed_form_currents(params, &coeffs))
}

fn closed_form_currents(params: &WireParams, coeffs: &GmeCoefficients) -> HeatCurrents {
    let hot = Mode::BOTH
        .iter()
        .map(|&mode| {
            let w = coeffs.frequency(mode);
            let wc = coeffs.rates(mode, Bath::Cold).emission;
            let wh = coeffs.rates(mode, Bath::Hot).emission;
            // e^{−Ω/T_h} − e^{−Ω/T_c} without cancellation for close temperatures
            let gap = (params.t_h - params.t_c) / (params.t_c * params.t_h);
            let boltz = -(-w / params.t_h).exp() * (-w * gap).exp_m1();
            w * wc * wh * boltz / -coeffs.delta_total(mode)
        })
        .sum();
    HeatCurrents::from_hot(hot)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmeSolution {
    pub coefficients: GmeCoefficients,
    pub modes: NormalModeState,
    pub result_covariance: CovarianceMatrix,
    pub heat_currents: HeatCurrents,
}

pub fn gme_solve(params: &WireParams) -> Result<GmeSolution> {
    params.validate()?;
    let coefficients = gme_coefficients(params)?;
    let modes = gme_stationary_modes(&coefficients);
    Ok(GmeSolution {
        coefficients,
        modes,
        result_covariance: modes.to_covariance(&coefficients.modes),
        heat_currents: closed_form_currents(params, &coefficients),
    })
}

pub fn gme_steady_state(params: &WireParams) -> Result<SteadyStateResult> {
    let sol = gme_solve(params)?;
    let rate = gme_dynamics(&sol.modes, &sol.coefficients);
    let scale = sol
        .modes
        .pi_sq
        .iter()
        .chain(sol.modes.eta_sq.iter())
        .fold(0.0f64, |m, x| m.max(x.abs()));
    let residual = rate
        .eta_sq
        .iter()
        .chain(rate.pi_sq.iter())
        .chain(rate.anti.iter())
        .fold(0.0f64, |m, x| m.max(x.abs()))
        / scale;
    Ok(SteadyStateResult::new(
        Method::Global,
        sol.result_covariance,
        sol.heat_currents,
        secular_validity_margin(params),
        Some(residual),
        None,
    ))
}
