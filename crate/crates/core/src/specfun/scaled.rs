//! Extended-range real numbers.
//!
//! Spherical Bessel functions of high degree at small argument leave the
//! `f64` exponent range long before the products that enter operator
//! spectra do (`j_l(k) h_l(k)` stays of order `1/l`). [`Scaled`] carries a
//! mantissa in `[0.5, 1)` and a separate binary exponent so the factors can
//! be formed exactly and only the final quantity is rounded back to `f64`.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// `mant * 2^exp2` with `0.5 <= |mant| < 1`, or exactly zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled {
    mant: f64,
    exp2: i64,
}

/// Splits a finite `x` into `(m, e)` with `x = m * 2^e` and `0.5 <= |m| < 1`.
fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i64;
    if biased == 0 {
        let (m, e) = frexp(x * f64::powi(2.0, 64));
        return (m, e - 64);
    }
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (m, biased - 1022)
}

/// `m * 2^e` evaluated without intermediate overflow of the power.
fn ldexp(mut m: f64, mut e: i64) -> f64 {
    while e > 1000 {
        m *= f64::powi(2.0, 1000);
        e -= 1000;
        if m.is_infinite() {
            return m;
        }
    }
    while e < -1000 {
        m *= f64::powi(2.0, -1000);
        e += 1000;
        if m == 0.0 {
            return m;
        }
    }
    m * f64::powi(2.0, e as i32)
}

impl Scaled {
    pub const ZERO: Scaled = Scaled { mant: 0.0, exp2: 0 };

    pub fn new(x: f64) -> Self {
        debug_assert!(x.is_finite(), "Scaled::new on non-finite {x}");
        let (mant, exp2) = frexp(x);
        Scaled { mant, exp2 }
    }

    /// `mant * 2^exp2` for arbitrary finite `mant`.
    pub fn from_parts(mant: f64, exp2: i64) -> Self {
        let (m, e) = frexp(mant);
        if m == 0.0 {
            return Self::ZERO;
        }
        Scaled {
            mant: m,
            exp2: exp2 + e,
        }
    }

    pub fn mantissa(self) -> f64 {
        self.mant
    }

    pub fn exponent(self) -> i64 {
        self.exp2
    }

    pub fn is_zero(self) -> bool {
        self.mant == 0.0
    }

    pub fn signum(self) -> f64 {
        if self.mant == 0.0 {
            0.0
        } else {
            self.mant.signum()
        }
    }

    pub fn abs(self) -> Self {
        Scaled {
            mant: self.mant.abs(),
            exp2: self.exp2,
        }
    }

    /// Rounds to `f64`; overflows to `±inf` and underflows to (signed) zero.
    pub fn to_f64(self) -> f64 {
        if self.mant == 0.0 {
            return 0.0;
        }
        ldexp(self.mant, self.exp2)
    }

    /// Rounds to `f64` only when the result is a normal number (or zero).
    pub fn to_f64_checked(self) -> Option<f64> {
        let v = self.to_f64();
        if self.mant == 0.0 || (v.is_finite() && v.abs() >= f64::MIN_POSITIVE) {
            Some(v)
        } else {
            None
        }
    }

    /// Natural logarithm of the magnitude (`-inf` for zero).
    pub fn ln_abs(self) -> f64 {
        if self.mant == 0.0 {
            return f64::NEG_INFINITY;
        }
        self.mant.abs().ln() + self.exp2 as f64 * std::f64::consts::LN_2
    }

    pub fn log10_abs(self) -> f64 {
        self.ln_abs() / std::f64::consts::LN_10
    }

    pub fn sqrt(self) -> Self {
        assert!(self.mant >= 0.0, "sqrt of negative Scaled");
        if self.mant == 0.0 {
            return self;
        }
        if self.exp2 % 2 == 0 {
            Scaled::from_parts(self.mant.sqrt(), self.exp2 / 2)
        } else {
            Scaled::from_parts((2.0 * self.mant).sqrt(), (self.exp2 - 1) / 2)
        }
    }

    pub fn recip(self) -> Self {
        assert!(self.mant != 0.0, "reciprocal of zero Scaled");
        Scaled::from_parts(1.0 / self.mant, -self.exp2)
    }

    pub fn sqr(self) -> Self {
        self * self
    }

    /// The argument of larger magnitude, returned as an absolute value.
    pub fn max_with(self, other: Scaled) -> Scaled {
        if self.cmp_abs(other) == Ordering::Less {
            other.abs()
        } else {
            self.abs()
        }
    }

    /// Compares magnitudes.
    pub fn cmp_abs(self, other: Scaled) -> Ordering {
        match (self.mant == 0.0, other.mant == 0.0) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => self
                .exp2
                .cmp(&other.exp2)
                .then(self.mant.abs().total_cmp(&other.mant.abs())),
        }
    }
}

impl From<f64> for Scaled {
    fn from(x: f64) -> Self {
        Scaled::new(x)
    }
}

impl Mul for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: Scaled) -> Scaled {
        if self.mant == 0.0 || rhs.mant == 0.0 {
            return Scaled::ZERO;
        }
        Scaled::from_parts(self.mant * rhs.mant, self.exp2 + rhs.exp2)
    }
}

impl Mul<f64> for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: f64) -> Scaled {
        self * Scaled::new(rhs)
    }
}

impl Div for Scaled {
    type Output = Scaled;
    fn div(self, rhs: Scaled) -> Scaled {
        assert!(rhs.mant != 0.0, "division of Scaled by zero");
        if self.mant == 0.0 {
            return Scaled::ZERO;
        }
        Scaled::from_parts(self.mant / rhs.mant, self.exp2 - rhs.exp2)
    }
}

impl Add for Scaled {
    type Output = Scaled;
    fn add(self, rhs: Scaled) -> Scaled {
        if self.mant == 0.0 {
            return rhs;
        }
        if rhs.mant == 0.0 {
            return self;
        }
        let (big, small) = if self.exp2 >= rhs.exp2 {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let shift = big.exp2 - small.exp2;
        if shift > 1100 {
            return big;
        }
        Scaled::from_parts(big.mant + ldexp(small.mant, -shift), big.exp2)
    }
}

impl Neg for Scaled {
    type Output = Scaled;
    fn neg(self) -> Scaled {
        Scaled {
            mant: -self.mant,
            exp2: self.exp2,
        }
    }
}

impl Sub for Scaled {
    type Output = Scaled;
    fn sub(self, rhs: Scaled) -> Scaled {
        self + (-rhs)
    }
}

/// A complex number whose parts are [`Scaled`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtComplex {
    pub re: Scaled,
    pub im: Scaled,
}

impl ExtComplex {
    pub fn new(re: Scaled, im: Scaled) -> Self {
        ExtComplex { re, im }
    }

    /// Rounds both parts to `f64`; parts outside the range saturate.
    pub fn to_complex(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn frexp_covers_subnormals() {
        let (m, e) = frexp(f64::MIN_POSITIVE / 8.0);
        assert_eq!(m, 0.5);
        assert_eq!(ldexp(m, e), f64::MIN_POSITIVE / 8.0);
    }

    #[test]
    fn huge_products_round_trip() {
        let a = Scaled::from_parts(0.75, 5000);
        let b = Scaled::from_parts(0.5, -5003);
        assert_eq!((a * b).to_f64(), 0.75 * 0.5 / 8.0);
        assert_eq!(a.to_f64(), f64::INFINITY);
        assert_eq!(a.to_f64_checked(), None);
        assert_eq!(b.to_f64_checked(), None);
        assert!((a.ln_abs() - (0.75f64.ln() + 5000.0 * std::f64::consts::LN_2)).abs() < 1e-9);
    }

    #[test]
    fn addition_aligns_exponents() {
        let a = Scaled::new(3.0);
        let b = Scaled::new(-1.25);
        assert_eq!((a + b).to_f64(), 1.75);
        assert_eq!((a - a).to_f64(), 0.0);
        let tiny = Scaled::from_parts(1.0, -5000);
        assert_eq!(a + tiny, a);
    }

    #[test]
    fn sqrt_handles_odd_exponents() {
        let x = Scaled::from_parts(0.5, 2001);
        let r = x.sqrt();
        assert!((r.sqr() / x).to_f64() - 1.0 < 1e-15);
        assert_eq!(Scaled::new(9.0).sqrt().to_f64(), 3.0);
    }

    proptest! {
        #[test]
        fn arithmetic_matches_f64(a in -1e100f64..1e100, b in -1e100f64..1e100) {
            let (sa, sb) = (Scaled::new(a), Scaled::new(b));
            let tol = |x: f64| 4.0 * f64::EPSILON * x.abs().max(1e-300);
            prop_assert!(((sa * sb).to_f64() - a * b).abs() <= tol(a * b));
            prop_assert!(((sa + sb).to_f64() - (a + b)).abs() <= 2.0 * f64::EPSILON * (a.abs() + b.abs()));
            if b != 0.0 {
                prop_assert!(((sa / sb).to_f64() - a / b).abs() <= tol(a / b));
            }
        }
    }
}
