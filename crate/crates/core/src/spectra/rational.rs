//! The rational representation `s_l(k) = -p_l(k)/q_l(k) + i k/q_l(k)` with
//!
//! ```text
//! q_l(k) = 1 +  a_1 k^-2 + ... +        a_l k^-2l
//! p_l(k) = 1 + 2a_1 k^-2 + ... + (l+1) a_l k^-2l
//! a_m = beta_m^l beta_m^m,   beta_m^l = (m+l)! / (m! (l-m)! 2^m)
//! ```
//!
//! The coefficients are exact big integers. Every term of `p` and `q` is
//! positive, so the sums are evaluated without cancellation in extended
//! range and only the final quotient is rounded.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::specfun::{ExtComplex, Scaled};

/// Largest degree accepted by the rational form.
pub const RATIONAL_MAX_ELL: usize = 500;

/// `beta_m^l = C(l+m, 2m) (2m-1)!!`, an integer.
pub fn beta(l: usize, m: usize) -> BigUint {
    assert!(m <= l, "beta_m^l needs m <= l");
    let mut num = BigUint::one();
    for i in (l - m + 1)..=(l + m) {
        num *= BigUint::from(i);
    }
    let mut den = BigUint::one();
    for i in 1..=m {
        den *= BigUint::from(i);
    }
    den <<= m;
    let q = &num / &den;
    debug_assert_eq!(&q * &den, num, "beta must be an integer");
    q
}

/// Rounds a big integer into extended range, keeping the top 64 bits.
pub fn biguint_to_scaled(n: &BigUint) -> Scaled {
    let bits = n.bits();
    let shift = bits.saturating_sub(64);
    let top = (n >> shift).to_u64().expect("top 64 bits fit in u64");
    Scaled::from_parts(top as f64, shift as i64)
}

/// Exact data of the rational form at one degree.
#[derive(Clone, Debug)]
pub struct RationalSData {
    ell: usize,
    alpha: Vec<BigUint>,
    alpha_scaled: Vec<Scaled>,
}

impl RationalSData {
    pub fn new(ell: usize) -> Result<Self> {
        if ell > RATIONAL_MAX_ELL {
            return Err(Error::Range(format!(
                "rational form supported for degree <= {RATIONAL_MAX_ELL}, got {ell}"
            )));
        }
        // beta_m^m = (2m-1)!! for the second factor.
        let alpha: Vec<BigUint> = (1..=ell).map(|m| beta(ell, m) * beta(m, m)).collect();
        let alpha_scaled = alpha.iter().map(biguint_to_scaled).collect();
        Ok(RationalSData {
            ell,
            alpha,
            alpha_scaled,
        })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// `alpha_1 .. alpha_l`.
    pub fn alpha(&self) -> &[BigUint] {
        &self.alpha
    }

    fn weighted_sum(&self, k: f64, weight: impl Fn(usize) -> f64) -> Scaled {
        let inv_k2 = Scaled::new(k * k).recip();
        let mut power = Scaled::new(1.0);
        let mut acc = Scaled::new(1.0);
        for (i, a) in self.alpha_scaled.iter().enumerate() {
            power = power * inv_k2;
            acc = acc + *a * power * weight(i + 1);
        }
        acc
    }

    pub fn q_of(&self, k: f64) -> Scaled {
        self.weighted_sum(k, |_| 1.0)
    }

    pub fn p_of(&self, k: f64) -> Scaled {
        self.weighted_sum(k, |m| (m + 1) as f64)
    }

    pub fn s_ext(&self, k: f64) -> ExtComplex {
        let q = self.q_of(k);
        ExtComplex::new(-(self.p_of(k) / q), Scaled::new(k) / q)
    }

    pub fn s(&self, k: f64) -> Complex64 {
        self.s_ext(k).to_complex()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degree_coefficients() {
        assert_eq!(beta(1, 1), BigUint::from(1u32));
        assert_eq!(RationalSData::new(1).unwrap().alpha(), &[BigUint::from(1u32)]);
        // beta_1^2 = 3!/(1! 1! 2) = 3, beta_2^2 = 4!/(2! 0! 4) = 3.
        let a2: Vec<u64> = RationalSData::new(2).unwrap().alpha().iter().map(|a| a.to_u64().unwrap()).collect();
        assert_eq!(a2, vec![3, 9]);
        // alpha_3 = (beta_3^3)^2 = 15^2.
        assert_eq!(RationalSData::new(3).unwrap().alpha()[2], BigUint::from(225u32));
    }

    #[test]
    fn beta_matches_factorial_definition() {
        fn fact(n: usize) -> BigUint {
            (1..=n).fold(BigUint::one(), |a, i| a * BigUint::from(i))
        }
        for l in 0..30 {
            for m in 0..=l {
                let direct = fact(m + l) / (fact(m) * fact(l - m) * (BigUint::one() << m));
                assert_eq!(beta(l, m), direct, "l={l} m={m}");
            }
        }
    }

    #[test]
    fn closed_forms_for_degrees_zero_and_one() {
        let s0 = RationalSData::new(0).unwrap().s(1.0);
        assert_eq!(s0, Complex64::new(-1.0, 1.0));
        for k in [0.3, 1.0, 4.0] {
            let s1 = RationalSData::new(1).unwrap().s(k);
            let expect = Complex64::new(-(k * k + 2.0), k * k * k) / (k * k + 1.0);
            assert!((s1 - expect).norm() < 1e-15 * expect.norm());
        }
    }

    #[test]
    fn big_integer_rounding() {
        let n = BigUint::one() << 3000u32;
        let s = biguint_to_scaled(&(n.clone() + BigUint::from(12345u32)));
        assert!((s / biguint_to_scaled(&n)).to_f64() - 1.0 < 1e-15);
        assert_eq!(biguint_to_scaled(&BigUint::from(7u32)).to_f64(), 7.0);
        assert!(RationalSData::new(RATIONAL_MAX_ELL + 1).is_err());
    }
}
