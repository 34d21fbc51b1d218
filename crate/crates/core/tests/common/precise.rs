//! Fixed-point big-integer arithmetic with 320 fractional bits, used to
//! evaluate heat-current expressions far beyond double precision.

use num::bigint::BigInt;
use num::{One, Signed, ToPrimitive, Zero};
use qwire_core::model::normal_modes;
use qwire_core::WireParams;

const BITS: usize = 320;

#[derive(Debug, Clone, PartialEq)]
pub struct Fixed(BigInt);

impl Fixed {
    pub fn one() -> Self {
        Fixed(BigInt::one() << BITS)
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite());
        if x == 0.0 {
            return Fixed(BigInt::zero());
        }
        let bits = x.abs().to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mantissa, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1 << 52), exp - 1075)
        };
        let shift = e + BITS as i64;
        assert!(shift >= 0, "value below fixed-point resolution");
        let v = BigInt::from(mantissa) << shift as usize;
        Fixed(if x < 0.0 { -v } else { v })
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.0.bits() as i64;
        let drop = (bits - 64).max(0);
        let head = (&self.0 >> drop as usize).to_f64().expect("fits");
        head * 2f64.powi((drop - BITS as i64) as i32)
    }

    pub fn add(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 - &o.0)
    }

    pub fn mul(&self, o: &Fixed) -> Fixed {
        Fixed((&self.0 * &o.0) >> BITS)
    }

    pub fn div(&self, o: &Fixed) -> Fixed {
        Fixed((&self.0 << BITS) / &o.0)
    }

    pub fn div_int(&self, n: u64) -> Fixed {
        Fixed(&self.0 / BigInt::from(n))
    }

    pub fn neg(&self) -> Fixed {
        Fixed(-&self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `e^{x}` by argument halving, a Taylor series and repeated squaring.
    pub fn exp(&self) -> Fixed {
        if self.0.is_negative() {
            return Fixed::one().div(&self.neg().exp());
        }
        let mut halvings = 0usize;
        let mut y = self.clone();
        while y.0 > (BigInt::one() << (BITS - 10)) {
            y = Fixed(&y.0 >> 1usize);
            halvings += 1;
        }
        let mut sum = Fixed::one();
        let mut term = Fixed::one();
        for n in 1u64.. {
            term = term.mul(&y).div_int(n);
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term);
        }
        for _ in 0..halvings {
            sum = sum.mul(&sum);
        }
        sum
    }
}

/// Hot-bath current of the global master equation, evaluated as the energy
/// flow through each mode's hot dissipator at the stationary mode state. All
/// double-precision inputs (frequencies, mixing weights, temperatures,
/// coupling) are taken as exact; every operation after that is carried with
/// 320 fractional bits.
pub fn gme_state_current(params: &WireParams) -> f64 {
    let modes = normal_modes(params);
    let f = Fixed::from_f64;
    let (c2, s2) = (f(modes.cos_sq()), f(modes.sin_sq()));
    let (l2, cut) = (f(params.lambda_sq), f(params.cutoff));
    let temps = [f(params.t_c), f(params.t_h)];
    let two = f(2.0);
    let half = f(0.5);
    let mut hot = Fixed(BigInt::zero());
    for (omega, weights) in [
        (modes.omega_plus, [c2.clone(), s2.clone()]),
        (modes.omega_minus, [s2.clone(), c2.clone()]),
    ] {
        let w = f(omega);
        let w2 = w.mul(&w);
        // J(Ω)/Ω = λ²Λ²/(Ω² + Λ²)
        let j_over_w = l2.mul(&cut).mul(&cut).div(&w2.add(&cut.mul(&cut)));
        let mut delta = Vec::new();
        let mut sigma = Vec::new();
        for b in 0..2 {
            let boltz = w.div(&temps[b]).neg().exp();
            let n = boltz.div(&Fixed::one().sub(&boltz));
            let base = weights[b].mul(&j_over_w);
            let emission = base.mul(&Fixed::one().add(&n));
            let absorption = base.mul(&n);
            delta.push(absorption.sub(&emission));
            sigma.push(absorption.add(&emission));
        }
        let d_tot = delta[0].add(&delta[1]);
        let s_tot = sigma[0].add(&sigma[1]);
        // ⟨η²⟩ = −Σ/(2ΔΩ), ⟨Π²⟩ = −ΣΩ/(2Δ)
        let eta_sq = s_tot.neg().div(&two.mul(&d_tot).mul(&w));
        let pi_sq = s_tot.neg().mul(&w).div(&two.mul(&d_tot));
        let energy = w2.mul(&eta_sq).add(&pi_sq);
        let term = delta[1].mul(&energy).add(&w.mul(&sigma[1]));
        hot = hot.add(&half.mul(&term));
    }
    hot.to_f64()
}
