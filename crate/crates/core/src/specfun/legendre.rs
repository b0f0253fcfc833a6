//! Associated Legendre functions and orthonormal spherical harmonics.
//!
//! The Condon-Shortley factor `(-1)^m` is part of `P_l^m`. Harmonics use
//! `Y_l^m = gamma_l^m e^{i m phi} P_l^m(cos theta)` for `m >= 0` and the
//! conjugation rule `Y_l^{-m} = (-1)^m conj(Y_l^m)` for negative orders.

use num_complex::Complex64;

use super::scaled::Scaled;
use super::HarmonicIndex;
use crate::error::{Error, Result};

/// Unnormalised `P_l^m(x)` with Condon-Shortley phase, by upward recurrence
/// in `l` at fixed `m`. Returns a range error when the value is not
/// representable (large `m` drives `(2m-1)!!` past `f64::MAX`).
pub fn assoc_legendre(ell: usize, m: usize, x: f64) -> Result<f64> {
    if m > ell {
        return Err(Error::Domain(format!("order {m} exceeds degree {ell}")));
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("argument {x} outside [-1, 1]")));
    }
    let s = Scaled::new((1.0 - x) * (1.0 + x)).sqrt();
    let mut pmm = Scaled::new(1.0);
    for i in 1..=m {
        pmm = -(pmm * s * ((2 * i - 1) as f64));
    }
    let mut prev = Scaled::ZERO;
    let mut cur = pmm;
    let xs = Scaled::new(x);
    for l in m + 1..=ell {
        let next = (xs * cur * ((2 * l - 1) as f64) - prev * ((l + m - 1) as f64))
            / Scaled::new((l - m) as f64);
        prev = cur;
        cur = next;
    }
    cur.to_f64_checked()
        .or(if cur.log10_abs() < -300.0 { Some(0.0) } else { None })
        .ok_or_else(|| Error::Range(format!("P_{ell}^{m}({x}) overflows f64")))
}

/// Offset of `(l, m)`, `0 <= m <= l`, in a triangular table.
#[inline]
pub fn tri_index(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

/// Orthonormalised Legendre values `gamma_l^m P_l^m(cos theta)` and their
/// `theta` derivatives for all `0 <= m <= l <= lmax` at one colatitude.
#[derive(Clone, Debug)]
pub struct LegendreTable {
    lmax: usize,
    cos_t: f64,
    sin_t: f64,
    p: Vec<f64>,
}

impl LegendreTable {
    pub fn new(lmax: usize, theta: f64) -> Self {
        let (sin_t, cos_t) = theta.sin_cos();
        let sin_t = sin_t.abs();
        let mut p = vec![0.0; tri_index(lmax, lmax) + 1];
        let mut pmm = 1.0 / (4.0 * std::f64::consts::PI).sqrt();
        for m in 0..=lmax {
            if m > 0 {
                pmm *= -((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * sin_t;
            }
            p[tri_index(m, m)] = pmm;
            if m == lmax {
                break;
            }
            p[tri_index(m + 1, m)] = ((2 * m + 3) as f64).sqrt() * cos_t * pmm;
            let mf = m as f64;
            for l in m + 2..=lmax {
                let lf = l as f64;
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let lm1 = lf - 1.0;
                let b = ((lm1 * lm1 - mf * mf) / (4.0 * lm1 * lm1 - 1.0)).sqrt();
                p[tri_index(l, m)] =
                    a * (cos_t * p[tri_index(l - 1, m)] - b * p[tri_index(l - 2, m)]);
            }
        }
        LegendreTable {
            lmax,
            cos_t,
            sin_t,
            p,
        }
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    /// `gamma_l^m P_l^m(cos theta)` for `0 <= m <= l`.
    #[inline]
    pub fn value(&self, l: usize, m: usize) -> f64 {
        self.p[tri_index(l, m)]
    }

    /// `d/dtheta` of [`value`](Self::value); undefined at the poles.
    pub fn dtheta(&self, l: usize, m: usize) -> f64 {
        let lf = l as f64;
        let mut num = lf * self.cos_t * self.value(l, m);
        if l > m {
            let c = ((2.0 * lf + 1.0) / (2.0 * lf - 1.0) * ((l - m) * (l + m)) as f64).sqrt();
            num -= c * self.value(l - 1, m);
        }
        num / self.sin_t
    }

    pub fn sin_theta(&self) -> f64 {
        self.sin_t
    }
}

fn negative_order(idx: HarmonicIndex, y: Complex64) -> Complex64 {
    if idx.m >= 0 {
        y
    } else if idx.m % 2 == 0 {
        y.conj()
    } else {
        -y.conj()
    }
}

/// Orthonormal `Y_l^m(theta, phi)`.
pub fn sph_harmonic(idx: HarmonicIndex, theta: f64, phi: f64) -> Complex64 {
    let ma = idx.m.unsigned_abs();
    let t = LegendreTable::new(idx.ell, theta);
    let y = Complex64::from_polar(t.value(idx.ell, ma), ma as f64 * phi);
    negative_order(idx, y)
}

/// Values needed for surface gradients: `(Y, dY/dtheta, (1/sin theta) dY/dphi)`.
/// The surface gradient is `dY/dtheta e_theta + (1/sin theta) dY/dphi e_phi`.
pub fn sph_harmonic_grad(
    idx: HarmonicIndex,
    theta: f64,
    phi: f64,
) -> Result<(Complex64, Complex64, Complex64)> {
    let ma = idx.m.unsigned_abs();
    let t = LegendreTable::new(idx.ell, theta);
    if t.sin_theta() < 1e-12 {
        return Err(Error::Domain(format!(
            "surface gradient evaluated at a pole (theta = {theta})"
        )));
    }
    let e = Complex64::from_polar(1.0, ma as f64 * phi);
    let y = e * t.value(idx.ell, ma);
    let dt = e * t.dtheta(idx.ell, ma);
    let dp = Complex64::i() * (ma as f64) * y / t.sin_theta();
    Ok((
        negative_order(idx, y),
        negative_order(idx, dt),
        negative_order(idx, dp),
    ))
}
