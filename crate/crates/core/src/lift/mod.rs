//! Multiplication by the Cartesian coordinates in coefficient space.
//!
//! On the unit sphere `x_j Y_l^m` is a combination of at most four harmonics
//! of degree `l - 1` and `l + 1`. With
//!
//! ```text
//! A = sqrt((l+m)(l+m-1) / (4l^2-1))          -> (l-1, m-1)
//! B = sqrt((l-m)(l-m-1) / (4l^2-1))          -> (l-1, m+1)
//! C = sqrt((l-m+1)(l-m+2) / ((2l+1)(2l+3)))  -> (l+1, m-1)
//! D = sqrt((l+m+1)(l+m+2) / ((2l+1)(2l+3)))  -> (l+1, m+1)
//! E = sqrt((l^2-m^2) / (4l^2-1))             -> (l-1, m)
//! F = sqrt(((l+1)^2-m^2) / ((2l+1)(2l+3)))   -> (l+1, m)
//! ```
//!
//! the expansions are
//!
//! ```text
//! x1 Y = 1/2 (-A Y[l-1,m-1] + B Y[l-1,m+1] + C Y[l+1,m-1] - D Y[l+1,m+1])
//! x2 Y = i/2 (-A Y[l-1,m-1] - B Y[l-1,m+1] + C Y[l+1,m-1] + D Y[l+1,m+1])
//! x3 Y = E Y[l-1,m] + F Y[l+1,m]
//! ```
//!
//! Terms whose target violates `|M| <= L` carry a zero coefficient and are
//! dropped. The signs follow from `x1 +- i x2 = sin(theta) e^{+-i phi}` and
//! are checked against quadrature in the test suite.
//!
//! The normal on the unit sphere is `x` itself, so `n psi` and `n . v` are
//! lifts too, and the normal compression `psi -> n . S[n psi]` of a diagonal
//! operator `S` is diagonal with eigenvalue
//! `l/(2l+1) s_{l-1} + (l+1)/(2l+1) s_{l+1}` (`s_1` at `l = 0`).

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::{CoeffField, HarmonicIndex};
use crate::spectra::DiagonalOperator;

/// One of the three Cartesian coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X1,
    X2,
    X3,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X1, Axis::X2, Axis::X3];

    /// Axis from a 1-based index.
    pub fn from_index(i: usize) -> Result<Self> {
        match i {
            1 => Ok(Axis::X1),
            2 => Ok(Axis::X2),
            3 => Ok(Axis::X3),
            _ => Err(Error::InvalidInput(format!("axis index must be 1, 2 or 3, got {i}"))),
        }
    }

    /// 0-based position, for indexing component arrays.
    pub fn pos(self) -> usize {
        match self {
            Axis::X1 => 0,
            Axis::X2 => 1,
            Axis::X3 => 2,
        }
    }

    /// The coordinate at a unit vector.
    pub fn of(self, x: [f64; 3]) -> f64 {
        x[self.pos()]
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.pos() + 1)
    }
}

/// Expansion of `x_axis Y_l^m`, as `(target, coefficient)` pairs.
pub type LiftEntries = Vec<(HarmonicIndex, Complex64)>;

fn abcdef(l: usize, m: isize) -> [f64; 6] {
    let (lf, mf) = (l as f64, m as f64);
    let lo = 4.0 * lf * lf - 1.0;
    let hi = (2.0 * lf + 1.0) * (2.0 * lf + 3.0);
    let r = |num: f64, den: f64| if num <= 0.0 { 0.0 } else { (num / den).sqrt() };
    [
        r((lf + mf) * (lf + mf - 1.0), lo),
        r((lf - mf) * (lf - mf - 1.0), lo),
        r((lf - mf + 1.0) * (lf - mf + 2.0), hi),
        r((lf + mf + 1.0) * (lf + mf + 2.0), hi),
        r(lf * lf - mf * mf, lo),
        r((lf + 1.0) * (lf + 1.0) - mf * mf, hi),
    ]
}

fn collect(l: usize, m: isize, terms: [(isize, isize, Complex64); 4]) -> LiftEntries {
    terms
        .into_iter()
        .filter_map(|(dl, dm, c)| {
            let big_l = l as isize + dl;
            let big_m = m + dm;
            (big_l >= 0 && big_m.abs() <= big_l && c.norm() > 0.0).then(|| {
                (
                    HarmonicIndex {
                        ell: big_l as usize,
                        m: big_m,
                    },
                    c,
                )
            })
        })
        .collect()
}

/// Expansion of `x_axis Y_l^m` in orthonormal harmonics.
pub fn lift_coeffs(axis: Axis, idx: HarmonicIndex) -> LiftEntries {
    lift_coeffs_signed(axis, idx, 1.0)
}

/// The same expansion with the sign of the `D` term of `x2` taken from a
/// literal reading of the printed lemma, which has `-D`. Kept so the
/// verification suite can show that the literal reading fails quadrature.
pub fn lift_coeffs_literal(axis: Axis, idx: HarmonicIndex) -> LiftEntries {
    lift_coeffs_signed(axis, idx, -1.0)
}

fn lift_coeffs_signed(axis: Axis, idx: HarmonicIndex, x2_d_sign: f64) -> LiftEntries {
    let (l, m) = (idx.ell, idx.m);
    let [a, b, c, d, e, f] = abcdef(l, m);
    let re = |v: f64| Complex64::new(v, 0.0);
    let im = |v: f64| Complex64::new(0.0, v);
    let terms = match axis {
        Axis::X1 => [
            (-1, -1, re(-0.5 * a)),
            (-1, 1, re(0.5 * b)),
            (1, -1, re(0.5 * c)),
            (1, 1, re(-0.5 * d)),
        ],
        Axis::X2 => [
            (-1, -1, im(-0.5 * a)),
            (-1, 1, im(-0.5 * b)),
            (1, -1, im(0.5 * c)),
            (1, 1, im(0.5 * d * x2_d_sign)),
        ],
        Axis::X3 => [
            (-1, 0, re(e)),
            (1, 0, re(f)),
            (0, 0, re(0.0)),
            (0, 0, re(0.0)),
        ],
    };
    collect(l, m, terms)
}

/// A deliberate corruption of one lift coefficient, for exercising the
/// verification suite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftFault {
    pub axis: Axis,
    pub source: HarmonicIndex,
    /// Multiplies every coefficient of the source expansion.
    pub factor: f64,
}

/// Cached expansions for all three axes and all degrees up to `lmax`.
#[derive(Clone, Debug)]
pub struct LiftTable {
    lmax: usize,
    entries: [Vec<LiftEntries>; 3],
}

impl LiftTable {
    pub fn new(lmax: usize) -> Self {
        let build = |axis: Axis| {
            HarmonicIndex::iter_upto(lmax)
                .map(|i| lift_coeffs(axis, i))
                .collect::<Vec<_>>()
        };
        LiftTable {
            lmax,
            entries: [build(Axis::X1), build(Axis::X2), build(Axis::X3)],
        }
    }

    /// A table with one source expansion scaled by `fault.factor`.
    pub fn with_fault(lmax: usize, fault: LiftFault) -> Self {
        let mut t = Self::new(lmax);
        if fault.source.ell <= lmax {
            for (_, c) in &mut t.entries[fault.axis.pos()][fault.source.linear()] {
                *c *= fault.factor;
            }
        }
        t
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn entries(&self, axis: Axis, idx: HarmonicIndex) -> &[(HarmonicIndex, Complex64)] {
        &self.entries[axis.pos()][idx.linear()]
    }

    /// `x_axis f`, truncated at `f.lmax() + 1` (exact).
    pub fn apply(&self, axis: Axis, f: &CoeffField) -> Result<CoeffField> {
        if f.lmax() > self.lmax {
            return Err(Error::Truncation(format!(
                "lift table built to degree {} applied to a field of degree {}",
                self.lmax,
                f.lmax()
            )));
        }
        Ok(apply_with(f, |i| self.entries(axis, i).to_vec()))
    }
}

fn apply_with(f: &CoeffField, entries: impl Fn(HarmonicIndex) -> LiftEntries) -> CoeffField {
    let mut out = CoeffField::zeros(f.lmax() + 1);
    for (i, c) in f.iter() {
        if c.re == 0.0 && c.im == 0.0 {
            continue;
        }
        for (t, w) in entries(i) {
            out.add_at(t, w * c);
        }
    }
    out
}

/// `x_axis f`, truncated at `f.lmax() + 1`; exact for band-limited input.
pub fn apply_lift(axis: Axis, f: &CoeffField) -> CoeffField {
    apply_with(f, |i| lift_coeffs(axis, i))
}

/// `n f = (x1 f, x2 f, x3 f)`.
pub fn times_normal(f: &CoeffField) -> [CoeffField; 3] {
    Axis::ALL.map(|a| apply_lift(a, f))
}

/// `n . v = sum_j x_j v_j` for a 3-vector of fields.
pub fn dot_normal(v: &[CoeffField]) -> Result<CoeffField> {
    if v.len() != 3 {
        return Err(Error::InvalidInput(format!("n . v needs 3 components, got {}", v.len())));
    }
    let lmax = v.iter().map(|c| c.lmax()).max().unwrap_or(0);
    Ok(Axis::ALL
        .iter()
        .zip(v)
        .fold(CoeffField::zeros(lmax + 1), |acc, (&a, c)| acc.add(&apply_lift(a, c))))
}

/// Eigenvalue of the normal compression of a diagonal operator at degree
/// `l`; needs the operator tabulated to `l + 1`.
pub fn sn_eigenvalue(diag: &DiagonalOperator, l: usize) -> Complex64 {
    if l == 0 {
        return diag.eigenvalue(1);
    }
    let lf = l as f64;
    let den = 2.0 * lf + 1.0;
    lf / den * diag.eigenvalue(l - 1) + (lf + 1.0) / den * diag.eigenvalue(l + 1)
}

/// `n . S[n f]` through the lifts, returned at its natural truncation
/// `f.lmax() + 2`. Degrees above `f.lmax()` cancel exactly.
pub fn apply_sn_composite(diag: &DiagonalOperator, f: &CoeffField) -> Result<CoeffField> {
    let nf = times_normal(f);
    let snf = nf
        .iter()
        .map(|c| diag.apply(c))
        .collect::<Result<Vec<_>>>()?;
    dot_normal(&snf)
}

/// Diagonal form of the normal compression.
pub fn apply_sn_direct(diag: &DiagonalOperator, f: &CoeffField) -> Result<CoeffField> {
    if f.lmax() + 1 > diag.lmax() {
        return Err(Error::Truncation(format!(
            "normal compression at degree {} needs the operator to degree {}, have {}",
            f.lmax(),
            f.lmax() + 1,
            diag.lmax()
        )));
    }
    Ok(f.map_degree(|l| sn_eigenvalue(diag, l)))
}

/// Relative size of composite-path leakage above the input truncation that
/// is accepted as round-off.
pub const SN_TAIL_TOL: f64 = 1e-12;
/// Relative disagreement accepted between the composite and direct paths.
pub const SN_AGREE_TOL: f64 = 1e-11;

/// `n . S[n f]`, computed through the lifts and checked against the
/// diagonal formula. Errors if the composite path leaks above `f.lmax()` or
/// the two paths disagree.
pub fn apply_sn(diag: &DiagonalOperator, f: &CoeffField) -> Result<CoeffField> {
    let composite = apply_sn_composite(diag, f)?;
    let direct = apply_sn_direct(diag, f)?;
    let scale = direct.norm().max(f.norm() * f64::EPSILON).max(f64::MIN_POSITIVE);
    let tail = composite.tail_norm(f.lmax() + 1);
    if tail > SN_TAIL_TOL * scale {
        return Err(Error::Truncation(format!(
            "normal compression leaked {tail:e} above degree {}",
            f.lmax()
        )));
    }
    let composite = composite.resized(f.lmax());
    let diff = composite.sub(&direct).norm();
    if diff > SN_AGREE_TOL * scale {
        return Err(Error::Inconsistent(format!(
            "normal compression: composite and diagonal paths differ by {diff:e}"
        )));
    }
    Ok(composite)
}
