//! Special functions: spherical Bessel and Hankel functions of real
//! argument, associated Legendre functions and orthonormal spherical
//! harmonics.

mod bessel;
mod legendre;
mod scaled;

pub use bessel::{
    sph_bessel_j, sph_bessel_j_scaled, sph_bessel_y, sph_hankel_h1, sph_hankel_h1_deriv,
    SphBesselTable,
};
pub use legendre::{
    assoc_legendre, sph_harmonic, sph_harmonic_grad, tri_index, LegendreTable,
};
pub use scaled::{ExtComplex, Scaled};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Degree/order pair `(l, m)` with `|m| <= l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HarmonicIndex {
    pub ell: usize,
    pub m: isize,
}

impl HarmonicIndex {
    pub fn new(ell: usize, m: isize) -> Result<Self> {
        if m.unsigned_abs() > ell {
            return Err(Error::InvalidInput(format!(
                "harmonic order {m} exceeds degree {ell}"
            )));
        }
        Ok(HarmonicIndex { ell, m })
    }

    /// Position in the degree-major ordering `l^2 + l + m`.
    #[inline]
    pub fn linear(self) -> usize {
        (self.ell * self.ell + self.ell).wrapping_add_signed(self.m)
    }

    /// Inverse of [`linear`](Self::linear).
    pub fn from_linear(i: usize) -> Self {
        let ell = (i as f64).sqrt() as usize;
        // Guard against rounding in the square root.
        let ell = if (ell + 1) * (ell + 1) <= i {
            ell + 1
        } else if ell * ell > i {
            ell - 1
        } else {
            ell
        };
        HarmonicIndex {
            ell,
            m: i as isize - (ell * ell + ell) as isize,
        }
    }

    /// All indices with degree at most `lmax`, in linear order.
    pub fn iter_upto(lmax: usize) -> impl Iterator<Item = HarmonicIndex> {
        (0..(lmax + 1) * (lmax + 1)).map(HarmonicIndex::from_linear)
    }
}
