//! Local master equation: each node is damped by its own bath as if the
//! spring were absent, and the spring enters only through the Hamiltonian.
//! All ten second moments couple, so the steady state comes from a 10×10
//! linear solve.

use nalgebra::{SMatrix, SVector};

use crate::compare::{HeatCurrents, Method, SteadyStateResult};
use crate::error::{Error, Result};
use crate::gaussian::CovarianceMatrix;
use crate::model::{decay_rate, secular_validity_margin, Bath, WireParams};

pub type Matrix10 = SMatrix<f64, 10, 10>;
pub type Vector10 = SVector<f64, 10>;

pub const XC2: usize = 0;
pub const PC2: usize = 1;
pub const XPC: usize = 2;
pub const XH2: usize = 3;
pub const PH2: usize = 4;
pub const XPH: usize = 5;
pub const XCXH: usize = 6;
pub const PCPH: usize = 7;
pub const XCPH: usize = 8;
pub const XHPC: usize = 9;

/// Second moments in the order `⟨X_c²⟩, ⟨P_c²⟩, ⟨{X_c,P_c}⟩, ⟨X_h²⟩,
/// ⟨P_h²⟩, ⟨{X_h,P_h}⟩, ⟨X_cX_h⟩, ⟨P_cP_h⟩, ⟨X_cP_h⟩, ⟨X_hP_c⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmeState(pub Vector10);

impl LmeState {
    pub fn to_covariance(&self) -> CovarianceMatrix {
        let y = &self.0;
        CovarianceMatrix::from_rows([
            [y[XC2], 0.5 * y[XPC], y[XCXH], y[XCPH]],
            [0.5 * y[XPC], y[PC2], y[XHPC], y[PCPH]],
            [y[XCXH], y[XHPC], y[XH2], 0.5 * y[XPH]],
            [y[XCPH], y[PCPH], 0.5 * y[XPH], y[PH2]],
        ])
    }

    pub fn from_covariance(cov: &CovarianceMatrix) -> Self {
        let g = |i, j| cov.get(i, j);
        LmeState(Vector10::from_column_slice(&[
            g(0, 0),
            g(1, 1),
            2.0 * g(0, 1),
            g(2, 2),
            g(3, 3),
            2.0 * g(2, 3),
            g(0, 2),
            g(1, 3),
            g(0, 3),
            g(1, 2),
        ]))
    }
}

/// Local damping and diffusion of one node: `Δ̃ = [γ(−ω) − γ(ω)]/(2ω)`,
/// `Σ̃ = [γ(−ω) + γ(ω)]/(2ω)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalRates {
    pub delta: f64,
    pub sigma: f64,
}

pub fn local_rates(params: &WireParams, bath: Bath) -> Result<LocalRates> {
    let w = params.frequency(bath);
    let t = params.temperature(bath);
    let up = decay_rate(w, t, params)?;
    let down = decay_rate(-w, t, params)?;
    Ok(LocalRates {
        delta: (down - up) / (2.0 * w),
        sigma: (down + up) / (2.0 * w),
    })
}

/// `dy/dt = M y + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmeGenerator {
    pub m: Matrix10,
    pub c: Vector10,
}

impl LmeGenerator {
    pub fn rate(&self, y: &Vector10) -> Vector10 {
        self.m * y + self.c
    }
}

/// The generator split into its Hamiltonian part and one dissipative part
/// per bath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmeParts {
    pub hamiltonian: Matrix10,
    pub dissipators: [LmeGenerator; 2],
}

/// Index bundle for the moments owned by node `a` (with `b` the other node).
struct NodeIdx {
    x2: usize,
    p2: usize,
    xp: usize,
    /// `⟨X_a P_b⟩`
    xa_pb: usize,
    /// `⟨X_b P_a⟩`
    xb_pa: usize,
}

fn node_idx(bath: Bath) -> NodeIdx {
    match bath {
        Bath::Cold => NodeIdx {
            x2: XC2,
            p2: PC2,
            xp: XPC,
            xa_pb: XCPH,
            xb_pa: XHPC,
        },
        Bath::Hot => NodeIdx {
            x2: XH2,
            p2: PH2,
            xp: XPH,
            xa_pb: XHPC,
            xb_pa: XCPH,
        },
    }
}

pub fn lme_parts(params: &WireParams) -> Result<LmeParts> {
    let k = params.k;
    let mut h = Matrix10::zeros();
    let mut dissipators = [LmeGenerator {
        m: Matrix10::zeros(),
        c: Vector10::zeros(),
    }; 2];

    for (slot, bath) in Bath::BOTH.into_iter().enumerate() {
        let a = node_idx(bath);
        let nu2 = params.frequency(bath).powi(2) + k;
        let nu2_other = params.frequency(bath.other()).powi(2) + k;

        // Hamiltonian flow with H = Σ (P² + ν² X²)/2 − k X_c X_h
        h[(a.x2, a.xp)] += 1.0;
        h[(a.p2, a.xp)] -= nu2;
        h[(a.p2, a.xb_pa)] += 2.0 * k;
        h[(a.xp, a.p2)] += 2.0;
        h[(a.xp, a.x2)] -= 2.0 * nu2;
        h[(a.xp, XCXH)] += 2.0 * k;
        // ⟨X_a P_b⟩
        h[(a.xa_pb, PCPH)] += 1.0;
        h[(a.xa_pb, a.x2)] += k;
        h[(a.xa_pb, XCXH)] -= nu2_other;
        // ⟨P_cP_h⟩ receives k⟨{X_a,P_a}⟩/2 from each node
        h[(PCPH, a.xp)] += 0.5 * k;
        // ⟨X_cX_h⟩ = ⟨X_cP_h⟩ + ⟨X_hP_c⟩ rates
        h[(XCXH, a.xa_pb)] += 1.0;
        h[(PCPH, a.xa_pb)] -= nu2;

        let r = local_rates(params, bath)?;
        let w = params.frequency(bath);
        let d = &mut dissipators[slot];
        for idx in [a.x2, a.p2, a.xp] {
            d.m[(idx, idx)] += r.delta;
        }
        for idx in [XCXH, PCPH, XCPH, XHPC] {
            d.m[(idx, idx)] += 0.5 * r.delta;
        }
        d.c[a.x2] += r.sigma / (2.0 * w);
        d.c[a.p2] += w * r.sigma / 2.0;
    }
    Ok(LmeParts {
        hamiltonian: h,
        dissipators,
    })
}

pub fn lme_generator(params: &WireParams) -> Result<LmeGenerator> {
    let parts = lme_parts(params)?;
    let [dc, dh] = parts.dissipators;
    Ok(LmeGenerator {
        m: parts.hamiltonian + dc.m + dh.m,
        c: dc.c + dh.c,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmeSolution {
    pub state: LmeState,
    pub generator: LmeGenerator,
    /// `|M y + c| / |c|`.
    pub residual: f64,
    pub heat_currents: HeatCurrents,
}

pub fn lme_solve(params: &WireParams) -> Result<LmeSolution> {
    params.validate()?;
    let generator = lme_generator(params)?;
    let lu = generator.m.lu();
    let y = lu
        .solve(&(-generator.c))
        .ok_or(Error::Singular("local master equation"))?;
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular("local master equation"));
    }
    let state = LmeState(y);
    let residual = generator.rate(&y).norm() / generator.c.norm();
    Ok(LmeSolution {
        state,
        generator,
        residual,
        heat_currents: lme_heat_currents(&state, params)?,
    })
}

pub fn lme_steady_state(params: &WireParams) -> Result<SteadyStateResult> {
    let sol = lme_solve(params)?;
    Ok(SteadyStateResult::new(
        Method::Local,
        sol.state.to_covariance(),
        sol.heat_currents,
        secular_validity_margin(params),
        Some(sol.residual),
        None,
    ))
}

/// Incoming heat currents carried by each local dissipator.
pub fn lme_heat_currents(state: &LmeState, params: &WireParams) -> Result<HeatCurrents> {
    let y = &state.0;
    let k = params.k;
    let current = |bath: Bath| -> Result<f64> {
        let a = node_idx(bath);
        let w = params.frequency(bath);
        let r = local_rates(params, bath)?;
        Ok(
            0.5 * r.delta * (w * w * y[a.x2] + y[a.p2] + k * (y[a.x2] - y[XCXH]))
                + 0.5 * r.sigma * (w + k / (2.0 * w)),
        )
    };
    Ok(HeatCurrents {
        cold: current(Bath::Cold)?,
        hot: current(Bath::Hot)?,
    })
}
