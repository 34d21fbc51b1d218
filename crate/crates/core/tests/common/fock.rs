//! Truncated Fock-space density matrices of zero-mean two-mode Gaussian
//! states, built from the multidimensional Hermite recursion for their
//! matrix elements.

use nalgebra::{DMatrix, Matrix4, SymmetricEigen};
use num_complex::Complex64;
use qwire_core::CovarianceMatrix;

pub struct FockState {
    /// Levels kept per mode.
    pub cutoff: usize,
    /// Rows and columns indexed by `m_c · cutoff + m_h`.
    pub rho: DMatrix<Complex64>,
    eigen: SymmetricEigen<Complex64, nalgebra::Dyn>,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Complex covariance `Σ_ij = ½⟨{ξ_i, ξ_j†}⟩` with `ξ = (a_c, a_h, a_c†, a_h†)`.
pub fn complex_covariance(cov: &CovarianceMatrix) -> Matrix4<Complex64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let i = Complex64::new(0.0, h);
    #[rustfmt::skip]
    let w = Matrix4::new(
        c(h), i, c(0.0), c(0.0),
        c(0.0), c(0.0), c(h), i,
        c(h), -i, c(0.0), c(0.0),
        c(0.0), c(0.0), c(h), -i,
    );
    let g = cov.matrix().map(c);
    w * g * w.adjoint()
}

impl FockState {
    pub fn new(cov: &CovarianceMatrix, cutoff: usize) -> Self {
        let sigma = complex_covariance(cov);
        let q = sigma + Matrix4::identity() * c(0.5);
        let q_inv = q.try_inverse().expect("Q is positive definite");
        let mut x = Matrix4::<Complex64>::zeros();
        for k in 0..2 {
            x[(k, k + 2)] = c(1.0);
            x[(k + 2, k)] = c(1.0);
        }
        let a = x * (Matrix4::identity() - q_inv);
        let t = 1.0 / q.determinant().re.sqrt();

        let d = cutoff;
        let stride = [d * d * d, d * d, d, 1];
        let mut f = vec![c(0.0); d * d * d * d];
        f[0] = c(1.0);
        let sqrt: Vec<f64> = (0..=d).map(|n| (n as f64).sqrt()).collect();
        for flat in 1..f.len() {
            let k = [
                flat / stride[0],
                flat / stride[1] % d,
                flat / stride[2] % d,
                flat % d,
            ];
            let i = (0..4).find(|&i| k[i] > 0).expect("nonzero index");
            let mut kp = k;
            kp[i] -= 1;
            let base = flat - stride[i];
            let mut acc = c(0.0);
            for j in 0..4 {
                if kp[j] > 0 {
                    acc += a[(i, j)] * sqrt[kp[j]] * f[base - stride[j]];
                }
            }
            f[flat] = acc / sqrt[k[i]];
        }
        let n = d * d;
        let rho = DMatrix::from_fn(n, n, |row, col| {
            let (m1, m2) = (row / d, row % d);
            let (n1, n2) = (col / d, col % d);
            f[m1 * stride[0] + m2 * stride[1] + n1 * stride[2] + n2] * t
        });
        let eigen = SymmetricEigen::new((&rho + rho.adjoint()) * c(0.5));
        FockState { cutoff, rho, eigen }
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    /// `⟨a_c† a_c⟩`, `⟨a_h† a_h⟩` and `⟨a_c a_h⟩` from the matrix.
    pub fn moments(&self) -> (f64, f64, Complex64) {
        let d = self.cutoff;
        let (mut nc, mut nh, mut ach) = (0.0, 0.0, c(0.0));
        for m1 in 0..d {
            for m2 in 0..d {
                let r = m1 * d + m2;
                nc += m1 as f64 * self.rho[(r, r)].re;
                nh += m2 as f64 * self.rho[(r, r)].re;
                if m1 > 0 && m2 > 0 {
                    let lower = (m1 - 1) * d + (m2 - 1);
                    ach += self.rho[(lower, r)] * ((m1 * m2) as f64).sqrt();
                }
            }
        }
        (nc, nh, ach)
    }

    pub fn entropy(&self) -> f64 {
        self.eigen
            .eigenvalues
            .iter()
            .filter(|&&p| p > 1e-300)
            .map(|&p| -p * p.ln())
            .sum()
    }

    fn sqrt(&self) -> DMatrix<Complex64> {
        let e = &self.eigen;
        let s = DMatrix::from_diagonal(&e.eigenvalues.map(|p| c(p.max(0.0).sqrt())));
        &e.eigenvectors * s * e.eigenvectors.adjoint()
    }

    /// `(Tr √(√ρ σ √ρ))²`.
    pub fn fidelity(&self, other: &FockState) -> f64 {
        let r = self.sqrt();
        let m = &r * &other.rho * &r;
        let m = (&m + m.adjoint()) * c(0.5);
        let root: f64 = SymmetricEigen::new(m)
            .eigenvalues
            .iter()
            .map(|&p| p.max(0.0).sqrt())
            .sum();
        root * root
    }
}
