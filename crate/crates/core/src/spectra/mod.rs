//! Spectra of the Helmholtz boundary integral operators on the unit sphere.
//!
//! Every operator here acts on `Y_l^m` as multiplication by a number that
//! depends on `l` only:
//!
//! ```text
//! S      i k j_l h_l                    K = K^T   -1/2 + i k^2 j_l' h_l
//! N      i k^3 j_l' h_l'                D(eta)    1/2 + K - i eta S
//! N(eta) 1/2 - K - i eta N              S(eta)    i eta D(eta)^-1 N(1/eta)
//! ```
//!
//! with `h_l` the spherical Hankel function of the first kind at argument
//! `k`. The last one collapses to `s_l(k) = k h_l'(k) / h_l(k)` for every
//! `eta`. All eigenvalues are assembled from products of the extended-range
//! Bessel values, so the `f64` results are accurate even where `j_l` and
//! `y_l` individually leave the double range.

mod rational;

pub use rational::{beta, biguint_to_scaled, RationalSData, RATIONAL_MAX_ELL};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::CoeffField;
use crate::specfun::{ExtComplex, Scaled, SphBesselTable};

/// Wavenumber and combined-field coupling parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveContext {
    k: f64,
    eta: f64,
}

impl WaveContext {
    pub fn new(k: f64, eta: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidInput(format!("wavenumber k must be positive, got {k}")));
        }
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::InvalidInput(format!("coupling eta must be positive, got {eta}")));
        }
        Ok(WaveContext { k, eta })
    }

    /// The default coupling `eta = max(1, k)`.
    pub fn default_eta(k: f64) -> f64 {
        k.max(1.0)
    }

    pub fn with_default_eta(k: f64) -> Result<Self> {
        Self::new(k, Self::default_eta(k))
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Same wavenumber with `eta` replaced by `1/eta`.
    pub fn inverse_eta(&self) -> Self {
        WaveContext {
            k: self.k,
            eta: 1.0 / self.eta,
        }
    }
}

/// Which diagonal operator a table holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperatorKind {
    SingleLayer,
    DoubleLayer,
    Hypersingular,
    /// `D(eta) = 1/2 I + K^T - i eta S`.
    CombinedD,
    /// `N(eta) = 1/2 I - K - i eta N`, with the context's own `eta`.
    CombinedN,
    /// `S(eta) = i eta D(eta)^-1 N(1/eta)`, eigenvalues `s_l`.
    Scal,
    /// Caller-supplied eigenvalues.
    Custom,
}

impl OperatorKind {
    pub fn label(self) -> &'static str {
        match self {
            OperatorKind::SingleLayer => "S",
            OperatorKind::DoubleLayer => "K",
            OperatorKind::Hypersingular => "N",
            OperatorKind::CombinedD => "D(eta)",
            OperatorKind::CombinedN => "N(eta)",
            OperatorKind::Scal => "S(eta)",
            OperatorKind::Custom => "custom",
        }
    }
}

/// Eigenvalues of all operators at one context for `0 <= l <= lmax`.
///
/// Built on one Bessel table; cheap per degree once constructed.
#[derive(Clone, Debug)]
pub struct SpectralTable {
    ctx: WaveContext,
    bessel: SphBesselTable,
}

/// `(re, im)` of a complex number given as two extended-range parts.
fn cx(re: Scaled, im: Scaled) -> Complex64 {
    Complex64::new(re.to_f64(), im.to_f64())
}

impl SpectralTable {
    pub fn new(ctx: WaveContext, lmax: usize) -> Self {
        let bessel = SphBesselTable::new(lmax, ctx.k).expect("WaveContext guarantees k > 0");
        SpectralTable { ctx, bessel }
    }

    pub fn context(&self) -> WaveContext {
        self.ctx
    }

    pub fn lmax(&self) -> usize {
        self.bessel.lmax()
    }

    pub fn bessel(&self) -> &SphBesselTable {
        &self.bessel
    }

    fn k(&self, p: i32) -> Scaled {
        Scaled::new(self.ctx.k.powi(p))
    }

    pub fn single_layer(&self, l: usize) -> Complex64 {
        let b = &self.bessel;
        cx(-(self.k(1) * b.j(l) * b.y(l)), self.k(1) * b.j(l).sqr())
    }

    pub fn double_layer(&self, l: usize) -> Complex64 {
        let b = &self.bessel;
        let k2 = self.k(2);
        cx(
            Scaled::new(-0.5) - k2 * b.dj(l) * b.y(l),
            k2 * b.dj(l) * b.j(l),
        )
    }

    pub fn hypersingular(&self, l: usize) -> Complex64 {
        let b = &self.bessel;
        let k3 = self.k(3);
        cx(-(k3 * b.dj(l) * b.dy(l)), k3 * b.dj(l).sqr())
    }

    /// `D(eta) = k h (i k j' + eta j)`, expanded into parts.
    pub fn combined_d(&self, l: usize) -> Complex64 {
        let b = &self.bessel;
        let (k, k2) = (self.k(1), self.k(2));
        let eta = Scaled::new(self.ctx.eta);
        cx(
            -(k2 * b.dj(l) * b.y(l)) + eta * k * b.j(l).sqr(),
            k2 * b.dj(l) * b.j(l) + eta * k * b.j(l) * b.y(l),
        )
    }

    /// `N(eta)` with the context's `eta`.
    pub fn combined_n(&self, l: usize) -> Complex64 {
        self.combined_n_at(l, self.ctx.eta)
    }

    fn combined_n_at(&self, l: usize, eta: f64) -> Complex64 {
        let b = &self.bessel;
        let (k2, k3) = (self.k(2), self.k(3));
        let eta = Scaled::new(eta);
        cx(
            Scaled::new(1.0) + k2 * b.dj(l) * b.y(l) + eta * k3 * b.dj(l).sqr(),
            -(k2 * b.dj(l) * b.j(l)) + eta * k3 * b.dj(l) * b.dy(l),
        )
    }

    /// `s_l = k h_l'/h_l` in extended range:
    /// `k [(j'j + y'y) + i (j y' - j' y)] / (j^2 + y^2)`.
    pub fn s_hankel_ext(&self, l: usize) -> ExtComplex {
        let b = &self.bessel;
        let den = b.j(l).sqr() + b.y(l).sqr();
        let k = self.k(1);
        ExtComplex::new(
            k * (b.dj(l) * b.j(l) + b.dy(l) * b.y(l)) / den,
            k * (b.j(l) * b.dy(l) - b.dj(l) * b.y(l)) / den,
        )
    }

    /// `s_l` for `l >= -1`, with `s_{-1} = 0`.
    pub fn s_hankel(&self, l: isize) -> Complex64 {
        match l {
            -1 => Complex64::new(0.0, 0.0),
            l if l < -1 => panic!("s_l is defined for l >= -1, got {l}"),
            l => self.s_hankel_ext(l as usize).to_complex(),
        }
    }

    /// `s_l = l - k h_{l+1}/h_l`.
    pub fn s_diff(&self, l: usize) -> Complex64 {
        let b = &self.bessel;
        let den = b.j(l).sqr() + b.y(l).sqr();
        let k = self.k(1);
        let re = k * (b.j(l + 1) * b.j(l) + b.y(l + 1) * b.y(l)) / den;
        let im = k * (b.y(l + 1) * b.j(l) - b.j(l + 1) * b.y(l)) / den;
        Complex64::new(l as f64 - re.to_f64(), -im.to_f64())
    }

    /// `i eta N(1/eta) / D(eta)`, guarded against a vanishing denominator.
    pub fn scal(&self, l: usize) -> Result<Complex64> {
        let d = self.combined_d(l);
        if d.norm() < 1e-14 {
            return Err(Error::Degenerate {
                label: OperatorKind::CombinedD.label().into(),
                ell: l,
                modulus: d.norm(),
            });
        }
        let n = self.combined_n_at(l, 1.0 / self.ctx.eta);
        Ok(Complex64::i() * self.ctx.eta * n / d)
    }

    pub fn eigenvalue(&self, kind: OperatorKind, l: usize) -> Result<Complex64> {
        Ok(match kind {
            OperatorKind::SingleLayer => self.single_layer(l),
            OperatorKind::DoubleLayer => self.double_layer(l),
            OperatorKind::Hypersingular => self.hypersingular(l),
            OperatorKind::CombinedD => self.combined_d(l),
            OperatorKind::CombinedN => self.combined_n(l),
            OperatorKind::Scal => self.scal(l)?,
            OperatorKind::Custom => {
                return Err(Error::InvalidInput("custom operators have no formula".into()))
            }
        })
    }
}

pub fn eig_single_layer(ctx: &WaveContext, ell: usize) -> Complex64 {
    SpectralTable::new(*ctx, ell).single_layer(ell)
}

/// Eigenvalue of `K`, equal to that of `K^T`.
pub fn eig_double_layer(ctx: &WaveContext, ell: usize) -> Complex64 {
    SpectralTable::new(*ctx, ell).double_layer(ell)
}

pub fn eig_hypersingular(ctx: &WaveContext, ell: usize) -> Complex64 {
    SpectralTable::new(*ctx, ell).hypersingular(ell)
}

/// `s_l(k)` from the Hankel logarithmic derivative; `s_{-1} = 0`.
pub fn s_ell_hankel(ctx: &WaveContext, ell: isize) -> Complex64 {
    if ell == -1 {
        return Complex64::new(0.0, 0.0);
    }
    assert!(ell >= 0, "s_l is defined for l >= -1, got {ell}");
    SpectralTable::new(*ctx, ell as usize).s_hankel(ell)
}

/// `s_l(k)` with both parts in extended range.
pub fn s_ell_hankel_ext(ctx: &WaveContext, ell: usize) -> ExtComplex {
    SpectralTable::new(*ctx, ell).s_hankel_ext(ell)
}

/// `s_l(k)` from the rational form with exact integer coefficients.
pub fn s_ell_rational(ctx: &WaveContext, ell: usize) -> Result<Complex64> {
    Ok(RationalSData::new(ell)?.s(ctx.k))
}

/// `s_l(k) = l - k a_l` with `a_l = H_{l+3/2}(k) / H_{l+1/2}(k) = h_{l+1}(k) / h_l(k)`.
pub fn s_ell_diffform(ctx: &WaveContext, ell: usize) -> Complex64 {
    SpectralTable::new(*ctx, ell).s_diff(ell)
}

pub fn eig_d(ctx: &WaveContext, ell: usize) -> Complex64 {
    SpectralTable::new(*ctx, ell).combined_d(ell)
}

/// `1/2 - K - i eta N` using `ctx.eta()`; pass `ctx.inverse_eta()` for `N(1/eta)`.
pub fn eig_ncal(ctx: &WaveContext, ell: usize) -> Complex64 {
    SpectralTable::new(*ctx, ell).combined_n(ell)
}

pub fn eig_scal(ctx: &WaveContext, ell: usize) -> Result<Complex64> {
    SpectralTable::new(*ctx, ell).scal(ell)
}

/// An operator diagonal in the harmonic basis, tabulated for `0 <= l <= lmax`.
#[derive(Clone, Debug, Serialize)]
pub struct DiagonalOperator {
    context: WaveContext,
    kind: OperatorKind,
    values: Vec<Complex64>,
}

impl DiagonalOperator {
    pub fn new(ctx: WaveContext, kind: OperatorKind, lmax: usize) -> Result<Self> {
        Self::from_table(&SpectralTable::new(ctx, lmax), kind, lmax)
    }

    pub fn from_table(table: &SpectralTable, kind: OperatorKind, lmax: usize) -> Result<Self> {
        if lmax > table.lmax() {
            return Err(Error::Truncation(format!(
                "spectral table holds degree {} but {lmax} was requested",
                table.lmax()
            )));
        }
        let values = (0..=lmax)
            .map(|l| table.eigenvalue(kind, l))
            .collect::<Result<Vec<_>>>()?;
        Ok(DiagonalOperator {
            context: table.context(),
            kind,
            values,
        })
    }

    pub fn from_values(ctx: WaveContext, values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("diagonal operator needs at least one eigenvalue".into()));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidInput("non-finite eigenvalue".into()));
        }
        Ok(DiagonalOperator {
            context: ctx,
            kind: OperatorKind::Custom,
            values,
        })
    }

    pub fn context(&self) -> WaveContext {
        self.context
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn label(&self) -> &'static str {
        self.kind.label()
    }

    pub fn lmax(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Eigenvalue at degree `l`; panics above the tabulated range.
    pub fn eigenvalue(&self, l: usize) -> Complex64 {
        self.values[l]
    }

    fn check_range(&self, f: &CoeffField) -> Result<()> {
        if f.lmax() > self.lmax() {
            return Err(Error::Truncation(format!(
                "operator {} tabulated to degree {} applied to a field of degree {}",
                self.label(),
                self.lmax(),
                f.lmax()
            )));
        }
        Ok(())
    }

    pub fn apply(&self, f: &CoeffField) -> Result<CoeffField> {
        self.check_range(f)?;
        Ok(f.map_degree(|l| self.values[l]))
    }

    /// Applies the inverse, refusing eigenvalues below `guard` in modulus.
    pub fn solve(&self, f: &CoeffField, guard: f64) -> Result<CoeffField> {
        self.check_range(f)?;
        if let Some((l, v)) = self.values[..=f.lmax()]
            .iter()
            .enumerate()
            .find(|(_, v)| v.norm() < guard)
        {
            return Err(Error::Degenerate {
                label: self.label().into(),
                ell: l,
                modulus: v.norm(),
            });
        }
        Ok(f.map_degree(|l| 1.0 / self.values[l]))
    }
}
