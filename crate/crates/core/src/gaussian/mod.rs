//! Two-mode Gaussian state toolkit.
//!
//! States have zero first moments and are described by the 4×4 covariance
//! matrix `Γ_kl = ½⟨{R_k, R_l}⟩` in the quadrature ordering
//! `R = (X_c, P_c, X_h, P_h)`. The vacuum of a unit-frequency oscillator has
//! `Γ = I/2`, so physical states have symplectic eigenvalues `ν ≥ 1/2`.
//! Entropies are in nats.

mod discord;

pub use discord::{classical_correlations, gaussian_discord, DiscordOptions};

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Bath, WireParams};

/// Symplectic eigenvalues closer than this below 1/2 are treated as round-off
/// and clamped.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Symmetric 4×4 covariance matrix in `(X_c, P_c, X_h, P_h)` ordering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix(Matrix4<f64>);

impl CovarianceMatrix {
    /// Symmetrizes `m` as `(m + mᵀ)/2`.
    pub fn from_matrix(m: Matrix4<f64>) -> Self {
        CovarianceMatrix((m + m.transpose()) * 0.5)
    }

    pub fn from_rows(rows: [[f64; 4]; 4]) -> Self {
        Self::from_matrix(Matrix4::from_fn(|i, j| rows[i][j]))
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn to_rows(&self) -> [[f64; 4]; 4] {
        let mut rows = [[0.0; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.0[(i, j)];
            }
        }
        rows
    }

    fn offset(node: Bath) -> usize {
        match node {
            Bath::Cold => 0,
            Bath::Hot => 2,
        }
    }

    /// Reduced single-mode covariance of one node.
    pub fn marginal(&self, node: Bath) -> Matrix2<f64> {
        let o = Self::offset(node);
        self.0.fixed_view::<2, 2>(o, o).into_owned()
    }

    /// Correlation block with rows on `rows` and columns on the other node.
    pub fn cross_block(&self, rows: Bath) -> Matrix2<f64> {
        let o = Self::offset(rows);
        let p = Self::offset(rows.other());
        self.0.fixed_view::<2, 2>(o, p).into_owned()
    }

    /// Partial transpose: flips the sign of the cold-node momentum.
    pub fn partial_transpose(&self) -> CovarianceMatrix {
        let p = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, 1.0, 1.0));
        CovarianceMatrix(p * self.0 * p)
    }

    /// Relabels cold ↔ hot.
    pub fn swap_nodes(&self) -> CovarianceMatrix {
        let perm = [2, 3, 0, 1];
        CovarianceMatrix(Matrix4::from_fn(|i, j| self.0[(perm[i], perm[j])]))
    }

    /// Thermal product state of two uncoupled oscillators.
    pub fn thermal_product(omega_c: f64, n_c: f64, omega_h: f64, n_h: f64) -> Self {
        let vc = n_c + 0.5;
        let vh = n_h + 0.5;
        Self::from_matrix(Matrix4::from_diagonal(&nalgebra::Vector4::new(
            vc / omega_c,
            omega_c * vc,
            vh / omega_h,
            omega_h * vh,
        )))
    }
}

impl Serialize for CovarianceMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CovarianceMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Self::from_rows(<[[f64; 4]; 4]>::deserialize(d)?))
    }
}

/// The symplectic form `J_kl = −i[R_k, R_l]` for one or two modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticForm;

impl SymplecticForm {
    pub fn two_mode() -> Matrix4<f64> {
        #[rustfmt::skip]
        let j = Matrix4::new(
             0.0, 1.0,  0.0, 0.0,
            -1.0, 0.0,  0.0, 0.0,
             0.0, 0.0,  0.0, 1.0,
             0.0, 0.0, -1.0, 0.0,
        );
        j
    }

    pub fn single_mode() -> Matrix2<f64> {
        Matrix2::new(0.0, 1.0, -1.0, 0.0)
    }
}

/// Symplectic eigenvalues `(ν₁, ν₂)`, `ν₁ ≥ ν₂`, with no physicality check.
///
/// Uses the invariants `det Γ` and `Δ = det A + det B + 2 det C`. When the
/// two eigenvalues nearly coincide the discriminant only carries √ε relative
/// precision, so that case goes through the symmetric eigenproblem of
/// `−(Lᵀ J L)²`, `Γ = L Lᵀ`, which is well conditioned.
pub fn symplectic_spectrum(cov: &CovarianceMatrix) -> (f64, f64) {
    let a = cov.marginal(Bath::Cold).determinant();
    let b = cov.marginal(Bath::Hot).determinant();
    let c = cov.cross_block(Bath::Cold).determinant();
    let delta = a + b + 2.0 * c;
    let det = cov.matrix().determinant();
    let disc = delta * delta - 4.0 * det;
    if disc > 1e-6 * delta * delta {
        let hi = 0.5 * (delta + disc.sqrt());
        // product form for the small root keeps relative precision
        let lo = det / hi;
        return (hi.sqrt(), lo.max(0.0).sqrt());
    }
    match symplectic_spectrum_eigen(cov) {
        Some(pair) => pair,
        None => {
            let hi = 0.5 * (delta + disc.max(0.0).sqrt());
            let lo = if hi > 0.0 { det / hi } else { 0.0 };
            (hi.max(0.0).sqrt(), lo.max(0.0).sqrt())
        }
    }
}

/// Symplectic spectrum from a symmetric eigensolver; `None` when `Γ` is not
/// positive definite.
pub fn symplectic_spectrum_eigen(cov: &CovarianceMatrix) -> Option<(f64, f64)> {
    let l = cov.matrix().cholesky()?.unpack();
    let m = l.transpose() * SymplecticForm::two_mode() * l;
    let mut ev: Vec<f64> = (m.transpose() * m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    let hi = 0.5 * (ev[0] + ev[1]);
    let lo = 0.5 * (ev[2] + ev[3]);
    Some((hi.max(0.0).sqrt(), lo.max(0.0).sqrt()))
}

fn check_physical(nu: f64) -> Result<f64> {
    if nu.is_nan() || nu < 0.5 - PHYSICALITY_TOL {
        Err(Error::NonPhysical { nu })
    } else {
        Ok(nu.max(0.5))
    }
}

/// Symplectic eigenvalues `(ν₁, ν₂)` with `ν₁ ≥ ν₂ ≥ 1/2`.
pub fn symplectic_eigenvalues(cov: &CovarianceMatrix) -> Result<(f64, f64)> {
    let (hi, lo) = symplectic_spectrum(cov);
    Ok((check_physical(hi)?, check_physical(lo)?))
}

/// Symplectic eigenvalue `√det Γ` of a single-mode covariance.
pub fn single_mode_symplectic(cov: &Matrix2<f64>) -> Result<f64> {
    check_physical(cov.determinant().max(0.0).sqrt())
}

/// Entropy contribution of one symplectic eigenvalue.
pub fn entropy_term(nu: f64) -> f64 {
    let up = nu + 0.5;
    let down = nu - 0.5;
    let lower = if down > 0.0 { down * down.ln() } else { 0.0 };
    up * up.ln() - lower
}

/// Von Neumann entropy of the two-mode state.
pub fn entropy(cov: &CovarianceMatrix) -> Result<f64> {
    let (n1, n2) = symplectic_eigenvalues(cov)?;
    Ok(entropy_term(n1) + entropy_term(n2))
}

pub fn single_mode_entropy(cov: &Matrix2<f64>) -> Result<f64> {
    Ok(entropy_term(single_mode_symplectic(cov)?))
}

/// `I = S(Γ_c) + S(Γ_h) − S(Γ)`.
pub fn mutual_information(cov: &CovarianceMatrix) -> Result<f64> {
    let sc = single_mode_entropy(&cov.marginal(Bath::Cold))?;
    let sh = single_mode_entropy(&cov.marginal(Bath::Hot))?;
    let s = entropy(cov)?;
    Ok((sc + sh - s).max(0.0))
}

/// Logarithmic negativity from the partially transposed covariance.
pub fn log_negativity(cov: &CovarianceMatrix) -> Result<f64> {
    symplectic_eigenvalues(cov)?;
    let (hi, lo) = symplectic_spectrum(&cov.partial_transpose());
    Ok([hi, lo].iter().map(|nu| (-(2.0 * nu).ln()).max(0.0)).sum())
}

fn complexify(m: &Matrix4<f64>) -> Matrix4<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Uhlmann fidelity between two zero-mean two-mode Gaussian states.
pub fn fidelity(g1: &CovarianceMatrix, g2: &CovarianceMatrix) -> Result<f64> {
    symplectic_eigenvalues(g1)?;
    symplectic_eigenvalues(g2)?;
    let j = SymplecticForm::two_mode();
    let m1 = g1.matrix();
    let m2 = g2.matrix();

    let a = (m1 + m2).determinant();
    let b = 16.0 * ((j * m1) * (j * m2) - Matrix4::identity() * 0.25).determinant();
    let ij_half = complexify(&j) * Complex64::new(0.0, 0.5);
    let d1 = (complexify(m1) + ij_half).determinant().re;
    let d2 = (complexify(m2) + ij_half).determinant().re;
    let c = 16.0 * d1 * d2;

    let clamp = |x: f64| if x < 0.0 && x > -1e-12 { 0.0 } else { x };
    let (b, c) = (clamp(b), clamp(c));
    if b < 0.0 || c < 0.0 || !(a > 0.0) {
        return Err(Error::NonPhysical { nu: f64::NAN });
    }
    let x = b.sqrt() + c.sqrt();
    let root = clamp(x * x - a).max(0.0).sqrt();
    // 1 / (x − root) written without the cancellation
    Ok(((x + root) / a).min(1.0))
}

/// Large-coupling limit of the logarithmic negativity of the global master
/// equation steady state for resonant nodes. Negative values mean no
/// entanglement is predicted.
pub fn strong_coupling_asymptote(params: &WireParams) -> Result<f64> {
    if (params.omega_h - params.omega_c).abs() > 1e-9 * params.omega_c {
        return Err(Error::Detuned);
    }
    if !(params.k > 0.0) {
        return Err(Error::InvalidParameter {
            name: "k",
            reason: "the asymptote needs k > 0".into(),
        });
    }
    let w = params.omega_c;
    let a_c = w / params.t_c;
    let a_h = w / params.t_h;
    // ln|1 − e^{a}| = a + ln(1 − e^{−a}); the bare exponents cancel because
    // 2ω/T̄ = a_c + a_h.
    let tail = |a: f64| (-(-a).exp_m1()).ln();
    let log_arg = (2.0 * params.k / (w * w)).ln() + 2.0 * (tail(a_c) + tail(a_h) - tail(a_c + a_h));
    Ok(0.25 * log_arg)
}

/// Correlation figures of one approximate state, relative to the exact one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub fidelity_to_exact: f64,
    pub mutual_information: f64,
    pub discord_arrow: f64,
    pub classical_arrow: f64,
    pub log_negativity: f64,
}

impl CorrelationReport {
    pub fn compute(
        state: &CovarianceMatrix,
        exact: &CovarianceMatrix,
        measured: Bath,
        options: &DiscordOptions,
    ) -> Result<Self> {
        let mutual = mutual_information(state)?;
        let discord = gaussian_discord(state, measured, options)?;
        Ok(CorrelationReport {
            fidelity_to_exact: fidelity(state, exact)?,
            mutual_information: mutual,
            discord_arrow: discord,
            classical_arrow: mutual - discord,
            log_negativity: log_negativity(state)?,
        })
    }
}
