//! Physical parameters of the wire and the quantities every solver shares:
//! the Ohmic spectral density with Lorentz-Drude cutoff, bosonic occupations,
//! bath decay rates and the normal-mode transformation.
//!
//! Units: node masses, ħ and k_B are all set to one.

use std::f64::consts::FRAC_PI_4;

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the two thermal baths. The cold bath couples to node `c`, the hot
/// bath to node `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bath {
    Cold,
    Hot,
}

impl Bath {
    pub const BOTH: [Bath; 2] = [Bath::Cold, Bath::Hot];

    pub fn other(self) -> Bath {
        match self {
            Bath::Cold => Bath::Hot,
            Bath::Hot => Bath::Cold,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Bath::Cold => "cold",
            Bath::Hot => "hot",
        }
    }
}

impl std::str::FromStr for Bath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "c" | "cold" => Ok(Bath::Cold),
            "h" | "hot" => Ok(Bath::Hot),
            _ => Err(Error::InvalidParameter {
                name: "node",
                reason: format!("expected `cold` or `hot`, got `{s}`"),
            }),
        }
    }
}

/// Full physical configuration of the wire and its two baths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WireParams {
    pub omega_c: f64,
    pub omega_h: f64,
    /// Inter-node spring constant (units of frequency squared).
    pub k: f64,
    pub t_c: f64,
    pub t_h: f64,
    /// Dissipation strength λ².
    pub lambda_sq: f64,
    /// Lorentz-Drude cutoff Λ.
    pub cutoff: f64,
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite and > 0, got {value}"),
        })
    }
}

impl WireParams {
    pub fn new(
        omega_c: f64,
        omega_h: f64,
        k: f64,
        t_c: f64,
        t_h: f64,
        lambda_sq: f64,
        cutoff: f64,
    ) -> Result<Self> {
        let p = WireParams {
            omega_c,
            omega_h,
            k,
            t_c,
            t_h,
            lambda_sq,
            cutoff,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        positive("omega_c", self.omega_c)?;
        positive("omega_h", self.omega_h)?;
        positive("t_c", self.t_c)?;
        positive("t_h", self.t_h)?;
        positive("lambda_sq", self.lambda_sq)?;
        positive("cutoff", self.cutoff)?;
        if !(self.k.is_finite() && self.k >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "k",
                reason: format!("must be finite and >= 0, got {}", self.k),
            });
        }
        if self.cutoff <= self.omega_c.max(self.omega_h) {
            return Err(Error::InvalidParameter {
                name: "cutoff",
                reason: format!(
                    "must exceed max(omega_c, omega_h) = {}",
                    self.omega_c.max(self.omega_h)
                ),
            });
        }
        Ok(())
    }

    pub fn with_k(mut self, k: f64) -> Result<Self> {
        self.k = k;
        self.validate()?;
        Ok(self)
    }

    pub fn temperature(&self, bath: Bath) -> f64 {
        match bath {
            Bath::Cold => self.t_c,
            Bath::Hot => self.t_h,
        }
    }

    pub fn frequency(&self, bath: Bath) -> f64 {
        match bath {
            Bath::Cold => self.omega_c,
            Bath::Hot => self.omega_h,
        }
    }

    /// δ_ω² = ω_h² − ω_c².
    pub fn detuning_sq(&self) -> f64 {
        (self.omega_h - self.omega_c) * (self.omega_h + self.omega_c)
    }

    /// The same wire with the roles of the two nodes (and baths) exchanged.
    pub fn swapped(&self) -> WireParams {
        WireParams {
            omega_c: self.omega_h,
            omega_h: self.omega_c,
            t_c: self.t_h,
            t_h: self.t_c,
            ..*self
        }
    }
}

/// Normal-mode decomposition of the coupled potential.
///
/// `η₊ = cosϑ X_c − sinϑ X_h` oscillates at `omega_plus`,
/// `η₋ = sinϑ X_c + cosϑ X_h` at `omega_minus`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalModes {
    pub theta: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
}

impl NormalModes {
    pub fn cos_sq(&self) -> f64 {
        self.theta.cos().powi(2)
    }

    pub fn sin_sq(&self) -> f64 {
        self.theta.sin().powi(2)
    }

    pub fn sin_cos(&self) -> f64 {
        self.theta.sin() * self.theta.cos()
    }
}

pub fn normal_modes(params: &WireParams) -> NormalModes {
    let d2 = params.detuning_sq();
    let k = params.k;
    let s = (2.0 * k).hypot(d2);
    let wc2 = params.omega_c * params.omega_c;
    let wh2 = params.omega_h * params.omega_h;

    let theta = if s == 0.0 {
        FRAC_PI_4
    } else {
        // s ∓ δ² without cancellation: one of the two is 4k²/(s ± δ²).
        let (s_minus, s_plus) = if d2 >= 0.0 {
            (4.0 * k * k / (s + d2), s + d2)
        } else {
            (s - d2, 4.0 * k * k / (s - d2))
        };
        let cos = (s_minus / (2.0 * s)).sqrt();
        let sin = (s_plus / (2.0 * s)).sqrt();
        sin.atan2(cos)
    };

    let plus_sq = 0.5 * (wc2 + wh2 + 2.0 * k + s);
    // Ω₋² from the determinant identity avoids cancellation at large k.
    let det = wc2 * wh2 + k * (wc2 + wh2);
    let minus_sq = det / plus_sq;

    NormalModes {
        theta,
        omega_plus: plus_sq.sqrt(),
        omega_minus: minus_sq.sqrt(),
    }
}

/// Ohmic spectral density with Lorentz-Drude cutoff, extended as an odd
/// function to negative frequencies.
pub fn spectral_density(omega: f64, params: &WireParams) -> f64 {
    let cut = params.cutoff;
    params.lambda_sq * omega * cut * cut / (omega * omega + cut * cut)
}

/// Bose-Einstein occupation `1 / (exp(ω/T) − 1)`.
pub fn occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::Domain(format!(
            "occupation needs omega > 0, got {omega}"
        )));
    }
    if !(temperature > 0.0) {
        return Err(Error::Domain(format!(
            "occupation needs T > 0, got {temperature}"
        )));
    }
    Ok(1.0 / (omega / temperature).exp_m1())
}

/// Bath decay rate γ(ω): emission for ω > 0, absorption for ω < 0.
///
/// The negative branch is evaluated as `2 J(|ω|) n(|ω|)` so that detailed
/// balance `γ(−ω) = e^{−ω/T} γ(ω)` holds without round-off from a subtraction.
pub fn decay_rate(omega: f64, temperature: f64, params: &WireParams) -> Result<f64> {
    let magnitude = omega.abs();
    if !(magnitude >= 1e-12 * params.cutoff) {
        return Err(Error::Domain(format!(
            "decay rate is not evaluated at omega = {omega}"
        )));
    }
    let j = spectral_density(magnitude, params);
    let n = occupation(magnitude, temperature)?;
    Ok(if omega > 0.0 {
        2.0 * j * (1.0 + n)
    } else {
        2.0 * j * n
    })
}

/// Ratio of the dissipation strength to the normal-mode splitting
/// `√((4k² + δ_ω⁴) / (2(ω_h² + ω_c²)))`. Values ≳ 1 mean the secular
/// approximation behind the global master equation is not justified.
pub fn secular_validity_margin(params: &WireParams) -> f64 {
    let d2 = params.detuning_sq();
    let splitting_sq = (4.0 * params.k * params.k + d2 * d2)
        / (2.0 * (params.omega_h.powi(2) + params.omega_c.powi(2)));
    params.lambda_sq / splitting_sq.sqrt()
}

/// Orthogonal map from normal-mode quadratures `(η₊, Π₊, η₋, Π₋)` to the
/// local quadratures `(X_c, P_c, X_h, P_h)`.
pub fn rotation_matrix(theta: f64) -> Matrix4<f64> {
    let (s, c) = theta.sin_cos();
    #[rustfmt::skip]
    let r = Matrix4::new(
         c, 0.0,   s, 0.0,
       0.0,   c, 0.0,   s,
        -s, 0.0,   c, 0.0,
       0.0,  -s, 0.0,   c,
    );
    r
}
