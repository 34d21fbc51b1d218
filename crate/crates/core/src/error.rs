use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("frequency out of domain: {0}")]
    Domain(String),

    #[error("non-physical covariance matrix: smallest symplectic eigenvalue {nu} < 1/2")]
    NonPhysical { nu: f64 },

    #[error("singular linear system in {0}")]
    Singular(&'static str),

    #[error("quadrature did not converge: estimated error {error:e} on [{lo:e}, {hi:e}]")]
    Quadrature { error: f64, lo: f64, hi: f64 },

    #[error("detuned nodes: the strong-coupling asymptote needs omega_c == omega_h")]
    Detuned,
}

pub type Result<T> = std::result::Result<T, Error>;
