//! Steady states of two coupled harmonic oscillators, each attached to its own
//! ohmic heat bath, computed four ways: a global master equation, a local
//! master equation, a partial Redfield equation and the exact Langevin
//! solution. Units: `m = ħ = k_B = 1`.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod compare;
pub mod error;
pub mod exact;
pub mod gaussian;
pub mod gme;
pub mod lme;
pub mod model;
pub mod quadrature;
pub mod redfield;

pub use error::{Error, Result};
pub use gaussian::{
    classical_correlations, entropy, fidelity, gaussian_discord, log_negativity,
    mutual_information, strong_coupling_asymptote, symplectic_eigenvalues, CorrelationReport,
    CovarianceMatrix, DiscordOptions, SymplecticForm,
};
pub use model::{Bath, NormalModes, WireParams};
