//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

pub mod fock;
pub mod precise;

use qwire_core::{CovarianceMatrix, WireParams};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

pub fn fig1a(k: f64) -> WireParams {
    WireParams::new(1.0, 2.0, k, 2.0, 3.0, 1e-3, 1e3).unwrap()
}

pub fn fig1b(k: f64) -> WireParams {
    WireParams::new(1.0, (1.0f64 + 2e-6).sqrt(), k, 2.0, 3.0, 1e-3, 1e3).unwrap()
}

pub fn fig2c(k: f64) -> WireParams {
    WireParams::new(10.0, 10.0, k, 1.0, 2.0, 1e-3, 1e3).unwrap()
}

/// Random physical two-mode state `S diag(ν₁,ν₁,ν₂,ν₂) Sᵀ`, with `S` built
/// from local squeezers, phase rotations and a beam splitter. Occupations
/// stay low so that truncated Fock representations are accurate.
pub fn random_state(rng: &mut ChaCha8Rng) -> CovarianceMatrix {
    use nalgebra::{Matrix2, Matrix4};
    let nu1 = rng.gen_range(0.5..0.8);
    let nu2 = rng.gen_range(0.5..0.8);
    let r1: f64 = rng.gen_range(-0.3..0.3);
    let r2: f64 = rng.gen_range(-0.3..0.3);
    let rot = |phi: f64| {
        let (s, c) = phi.sin_cos();
        Matrix2::new(c, -s, s, c)
    };
    let mut local = Matrix4::<f64>::zeros();
    local
        .fixed_view_mut::<2, 2>(0, 0)
        .copy_from(&(rot(rng.gen_range(0.0..3.2)) * Matrix2::new(r1.exp(), 0.0, 0.0, (-r1).exp())));
    local
        .fixed_view_mut::<2, 2>(2, 2)
        .copy_from(&(rot(rng.gen_range(0.0..3.2)) * Matrix2::new(r2.exp(), 0.0, 0.0, (-r2).exp())));
    let (sm, cm) = rng.gen_range(-0.8f64..0.8).sin_cos();
    #[rustfmt::skip]
    let bs = Matrix4::new(
        cm, 0.0, sm, 0.0,
        0.0, cm, 0.0, sm,
        -sm, 0.0, cm, 0.0,
        0.0, -sm, 0.0, cm,
    );
    let s = local * bs;
    let d = Matrix4::from_diagonal(&nalgebra::Vector4::new(nu1, nu1, nu2, nu2));
    CovarianceMatrix::from_matrix(s * d * s.transpose())
}

/// Random valid parameters with `T_h ≥ T_c`; one draw in ten has equal
/// temperatures and one in ten resonant nodes.
pub fn random_params(rng: &mut ChaCha8Rng) -> WireParams {
    let omega_c = log_uniform(rng, 0.2, 5.0);
    let omega_h = if rng.gen_bool(0.1) {
        omega_c
    } else {
        omega_c * (1.0 + log_uniform(rng, 1e-7, 2.0))
    };
    let t_c = log_uniform(rng, 0.05, 10.0);
    let t_h = if rng.gen_bool(0.1) {
        t_c
    } else {
        t_c * (1.0 + log_uniform(rng, 1e-6, 10.0))
    };
    WireParams::new(
        omega_c,
        omega_h,
        log_uniform(rng, 1e-6, 10.0),
        t_c,
        t_h,
        log_uniform(rng, 1e-5, 1e-2),
        1e3,
    )
    .unwrap()
}
