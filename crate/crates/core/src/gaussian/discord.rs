//! Gaussian quantum discord with the measurement on one node.
//!
//! The measured node is projected onto pure single-mode Gaussian states
//! `σ(s, φ) = R(φ) diag(s/2, 1/(2s)) R(φ)ᵀ`. The conditional state of the
//! other node has covariance `Γ_A − C (Γ_B + σ)⁻¹ Cᵀ`, independent of the
//! outcome. Homodyne detection is the `s → 0, ∞` limit and is scanned as its
//! own family.

use nalgebra::{Matrix2, Vector2};

use super::{entropy, entropy_term, single_mode_entropy, CovarianceMatrix};
use crate::error::Result;
use crate::model::Bath;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordOptions {
    /// Log-spaced squeezing grid points in `[1/squeeze_max, squeeze_max]`.
    pub squeeze_points: usize,
    pub squeeze_max: f64,
    /// Angle grid points in `[0, π)`.
    pub angle_points: usize,
    /// Coordinate descent stops once a sweep improves by less than this.
    pub refine_tol: f64,
}

impl Default for DiscordOptions {
    fn default() -> Self {
        DiscordOptions {
            squeeze_points: 200,
            squeeze_max: 1e3,
            angle_points: 64,
            refine_tol: 1e-8,
        }
    }
}

struct Blocks {
    a: Matrix2<f64>,
    b: Matrix2<f64>,
    c: Matrix2<f64>,
}

impl Blocks {
    fn conditional_nu(&self, inv: &Matrix2<f64>) -> f64 {
        let cond = self.a - self.c * inv * self.c.transpose();
        cond.determinant().max(0.25).sqrt()
    }

    fn general(&self, log_s: f64, phi: f64) -> f64 {
        let s = log_s.exp();
        let (sn, cs) = phi.sin_cos();
        let rot = Matrix2::new(cs, -sn, sn, cs);
        let sigma = rot * Matrix2::new(0.5 * s, 0.0, 0.0, 0.5 / s) * rot.transpose();
        match (self.b + sigma).try_inverse() {
            Some(inv) => entropy_term(self.conditional_nu(&inv)),
            None => f64::INFINITY,
        }
    }

    fn homodyne(&self, phi: f64) -> f64 {
        let (sn, cs) = phi.sin_cos();
        let u = Vector2::new(cs, sn);
        let var = (u.transpose() * self.b * u)[(0, 0)];
        let cu = self.c * u;
        let cond = self.a - cu * cu.transpose() / var;
        entropy_term(cond.determinant().max(0.25).sqrt())
    }
}

/// Golden-section minimum of `f` on `[lo, hi]`.
fn golden(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

fn min_conditional_entropy(blocks: &Blocks, opts: &DiscordOptions) -> f64 {
    let ns = opts.squeeze_points.max(2);
    let na = opts.angle_points.max(1);
    let ls_max = opts.squeeze_max.ln();
    let ls_step = 2.0 * ls_max / (ns - 1) as f64;
    let a_step = std::f64::consts::PI / na as f64;

    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..ns {
        let ls = -ls_max + i as f64 * ls_step;
        for j in 0..na {
            let phi = j as f64 * a_step;
            let v = blocks.general(ls, phi);
            if v < best.0 {
                best = (v, ls, phi);
            }
        }
    }

    let (mut val, mut ls, mut phi) = best;
    for _ in 0..100 {
        let before = val;
        let lo = (ls - ls_step).max(-ls_max);
        let hi = (ls + ls_step).min(ls_max);
        let (x, v) = golden(|x| blocks.general(x, phi), lo, hi, 1e-10);
        if v < val {
            val = v;
            ls = x;
        }
        let (x, v) = golden(|x| blocks.general(ls, x), phi - a_step, phi + a_step, 1e-10);
        if v < val {
            val = v;
            phi = x;
        }
        if before - val < opts.refine_tol {
            break;
        }
    }

    let mut hom = (f64::INFINITY, 0.0);
    for j in 0..na {
        let phi = j as f64 * a_step;
        let v = blocks.homodyne(phi);
        if v < hom.0 {
            hom = (v, phi);
        }
    }
    let (_, v) = golden(
        |x| blocks.homodyne(x),
        hom.1 - a_step,
        hom.1 + a_step,
        1e-10,
    );
    val.min(v).min(hom.0)
}

/// Gaussian discord with the measurement performed on `measured`.
pub fn gaussian_discord(
    cov: &CovarianceMatrix,
    measured: Bath,
    opts: &DiscordOptions,
) -> Result<f64> {
    let s_total = entropy(cov)?;
    let s_measured = single_mode_entropy(&cov.marginal(measured))?;
    let other = measured.other();
    let blocks = Blocks {
        a: cov.marginal(other),
        b: cov.marginal(measured),
        c: cov.cross_block(other),
    };
    let cond = min_conditional_entropy(&blocks, opts);
    let q = s_measured - s_total + cond;
    Ok(if q < 0.0 && q > -1e-10 { 0.0 } else { q })
}

/// Classical correlations `J = I − D`.
pub fn classical_correlations(
    cov: &CovarianceMatrix,
    measured: Bath,
    opts: &DiscordOptions,
) -> Result<f64> {
    Ok(super::mutual_information(cov)? - gaussian_discord(cov, measured, opts)?)
}
