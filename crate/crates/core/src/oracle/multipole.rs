//! Exact Maxwell multipole fields.
//!
//! With `G = grad_S Y_l^m`, `T = G x xhat` and a spherical Bessel or Hankel
//! function `z_l`, the field
//!
//! ```text
//! E(r xhat) = sum a z_l(kr) T + i b [ (z_l'(kr) + z_l(kr)/kr) G + l(l+1) z_l(kr)/kr Y xhat ]
//! ```
//!
//! is divergence free and solves Maxwell's equations. The `b` bracket equals
//! `((l+1) z_{l-1} I_{l-1} + l z_{l+1} N_{l+1}) / (2l+1)` written with the
//! usual vector harmonics, and `E . x = (i/k) sum b l(l+1) z_l(kr) Y`.
//!
//! On the sphere the Cartesian components of `G` and `T` are finite
//! combinations of scalar harmonics. If `x_j Y_l = A_j + B_j` splits the lift
//! into its degree `l-1` and `l+1` parts, then `G_j = (l+1) A_j - l B_j`,
//! because `r^l Y` and `r^-(l+1) Y` are harmonic. `T = -i L Y` with the
//! angular momentum `L = -i x x grad`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::{CoeffField, HarmonicIndex, VectorCoeffField};
use crate::lift::{lift_coeffs, Axis};
use crate::solver::{IncidentTraces, ScatterSolution};
use crate::specfun::{sph_harmonic_grad, SphBesselTable};
use crate::spectra::WaveContext;

/// One term `(l, m, a, b)` of a multipole expansion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultipoleTerm {
    pub l: usize,
    pub m: isize,
    pub a: Complex64,
    pub b: Complex64,
}

/// A finite multipole expansion. Degree zero carries no electromagnetic
/// field and is rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecJson", into = "SpecJson")]
pub struct MultipoleSpec {
    terms: Vec<MultipoleTerm>,
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    terms: Vec<MultipoleTerm>,
}

impl TryFrom<SpecJson> for MultipoleSpec {
    type Error = Error;
    fn try_from(s: SpecJson) -> Result<Self> {
        MultipoleSpec::new(s.terms)
    }
}

impl From<MultipoleSpec> for SpecJson {
    fn from(s: MultipoleSpec) -> Self {
        SpecJson { terms: s.terms }
    }
}

impl MultipoleSpec {
    pub fn new(terms: Vec<MultipoleTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidInput("multipole spec has no terms".into()));
        }
        for t in &terms {
            if t.l == 0 || t.m.unsigned_abs() > t.l {
                return Err(Error::InvalidInput(format!(
                    "multipole term needs l >= 1 and |m| <= l, got ({}, {})",
                    t.l, t.m
                )));
            }
            if ![t.a.re, t.a.im, t.b.re, t.b.im].iter().all(|v| v.is_finite()) {
                return Err(Error::InvalidInput("non-finite multipole coefficient".into()));
            }
        }
        Ok(MultipoleSpec { terms })
    }

    pub fn terms(&self) -> &[MultipoleTerm] {
        &self.terms
    }

    pub fn max_degree(&self) -> usize {
        self.terms.iter().map(|t| t.l).max().unwrap_or(0)
    }
}

/// Radial dependence of a multipole field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Radial {
    /// `h_l`, radiating.
    Hankel,
    /// `j_l`, regular at the origin.
    Bessel,
}

/// `z_l`, `z_l'` and `z_l''` at one argument.
#[derive(Clone, Copy, Debug)]
struct RadialValues {
    z: Complex64,
    dz: Complex64,
    d2z: Complex64,
}

fn radial_values(kind: Radial, lmax: usize, x: f64) -> Result<Vec<RadialValues>> {
    let t = SphBesselTable::new(lmax, x)?;
    (0..=lmax)
        .map(|l| {
            let (z, dz) = match kind {
                Radial::Hankel => (t.h(l)?, t.dh(l)?),
                Radial::Bessel => (t.j(l).to_f64().into(), t.dj(l).to_f64().into()),
            };
            let big_l = (l * (l + 1)) as f64;
            let d2z = -2.0 / x * dz - (1.0 - big_l / (x * x)) * z;
            Ok(RadialValues { z, dz, d2z })
        })
        .collect()
}

/// Radial weights of the `T`, `G` and `Y xhat` parts at `r = x / k`, and
/// their `r`-derivatives.
fn weights(term: &MultipoleTerm, v: RadialValues, k: f64, x: f64) -> ([Complex64; 3], [Complex64; 3]) {
    let i = Complex64::i();
    let big_l = (term.l * (term.l + 1)) as f64;
    let f = v.dz + v.z / x;
    let df = v.d2z + v.dz / x - v.z / (x * x);
    let g = v.z / x;
    let dg = v.dz / x - v.z / (x * x);
    (
        [term.a * v.z, i * term.b * f, i * term.b * big_l * g],
        [term.a * k * v.dz, i * term.b * k * df, i * term.b * big_l * k * dg],
    )
}

/// Cartesian components of `grad_S Y` as coefficient fields of degree
/// `l + 1`.
pub fn surface_gradient(idx: HarmonicIndex) -> [CoeffField; 3] {
    let l = idx.ell;
    Axis::ALL.map(|a| {
        let mut g = CoeffField::zeros(l + 1);
        for (t, c) in lift_coeffs(a, idx) {
            let w = if t.ell + 1 == l { (l + 1) as f64 } else { -(l as f64) };
            g.add_at(t, c * w);
        }
        g
    })
}

/// Cartesian components of `T = grad_S Y x xhat` as coefficient fields of
/// degree `l`.
pub fn rotational(idx: HarmonicIndex) -> [CoeffField; 3] {
    let (l, m) = (idx.ell, idx.m);
    let (lf, mf) = (l as f64, m as f64);
    let mut lx = CoeffField::zeros(l);
    let mut ly = CoeffField::zeros(l);
    let mut lz = CoeffField::zeros(l);
    lz.set(idx, mf.into());
    let i = Complex64::i();
    if m < l as isize {
        let up = ((lf - mf) * (lf + mf + 1.0)).sqrt();
        let t = HarmonicIndex { ell: l, m: m + 1 };
        lx.add_at(t, (0.5 * up).into());
        ly.add_at(t, -0.5 * i * up);
    }
    if m > -(l as isize) {
        let down = ((lf + mf) * (lf - mf + 1.0)).sqrt();
        let t = HarmonicIndex { ell: l, m: m - 1 };
        lx.add_at(t, (0.5 * down).into());
        ly.add_at(t, 0.5 * i * down);
    }
    [lx, ly, lz].map(|c| c.scale(-i))
}

fn unit_basis(theta: f64, phi: f64) -> ([f64; 3], [f64; 3], [f64; 3]) {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    ([st * cp, st * sp, ct], [ct * cp, ct * sp, -st], [-sp, cp, 0.0])
}

/// The multipole field at a point off the poles, from pointwise harmonics.
pub fn evaluate_multipole(spec: &MultipoleSpec, kind: Radial, k: f64, point: [f64; 3]) -> Result<[Complex64; 3]> {
    let r = (point.iter().map(|x| x * x).sum::<f64>()).sqrt();
    if !(r > 0.0) {
        return Err(Error::Domain("multipole evaluated at the origin".into()));
    }
    let theta = (point[2] / r).clamp(-1.0, 1.0).acos();
    let phi = point[1].atan2(point[0]);
    let (xh, eth, eph) = unit_basis(theta, phi);
    let x = k * r;
    let rv = radial_values(kind, spec.max_degree(), x)?;
    let mut e = [Complex64::new(0.0, 0.0); 3];
    for t in &spec.terms {
        let (y, dth, dph) = sph_harmonic_grad(HarmonicIndex::new(t.l, t.m)?, theta, phi)?;
        let g: [Complex64; 3] = std::array::from_fn(|j| dth * eth[j] + dph * eph[j]);
        // T = G x xhat.
        let tv = [
            g[1] * xh[2] - g[2] * xh[1],
            g[2] * xh[0] - g[0] * xh[2],
            g[0] * xh[1] - g[1] * xh[0],
        ];
        let (w, _) = weights(t, rv[t.l], k, x);
        for j in 0..3 {
            e[j] += w[0] * tv[j] + w[1] * g[j] + w[2] * y * xh[j];
        }
    }
    Ok(e)
}

/// Cartesian traces on the unit sphere: `(E, dr E, E . n, dr (E . n))`.
pub struct MultipoleTraces {
    pub value: VectorCoeffField,
    pub radial: VectorCoeffField,
    pub normal: CoeffField,
    pub normal_radial: CoeffField,
}

/// Traces of a multipole field on the unit sphere, exact in coefficient
/// space, at degree `lmax >= max l + 1`.
pub fn multipole_field_traces(spec: &MultipoleSpec, kind: Radial, k: f64, lmax: usize) -> Result<MultipoleTraces> {
    let need = spec.max_degree() + 1;
    if lmax < need {
        return Err(Error::InvalidInput(format!(
            "multipole traces need lmax >= {need}, got {lmax}"
        )));
    }
    let rv = radial_values(kind, spec.max_degree(), k)?;
    let mut value = vec![CoeffField::zeros(lmax); 3];
    let mut radial = vec![CoeffField::zeros(lmax); 3];
    let mut normal = CoeffField::zeros(lmax);
    let mut normal_radial = CoeffField::zeros(lmax);
    for t in &spec.terms {
        let idx = HarmonicIndex::new(t.l, t.m)?;
        let (w, dw) = weights(t, rv[t.l], k, k);
        let tv = rotational(idx);
        let g = surface_gradient(idx);
        let y = CoeffField::delta(t.l, idx);
        for j in 0..3 {
            let xy = crate::lift::apply_lift(Axis::ALL[j], &y);
            let part = |ws: &[Complex64; 3]| tv[j].scale(ws[0]).axpy(ws[1], &g[j]).axpy(ws[2], &xy);
            value[j] = value[j].add(&part(&w));
            radial[j] = radial[j].add(&part(&dw));
        }
        normal.add_at(idx, w[2]);
        normal_radial.add_at(idx, dw[2]);
    }
    Ok(MultipoleTraces {
        value: VectorCoeffField::new(value)?,
        radial: VectorCoeffField::new(radial)?,
        normal,
        normal_radial,
    })
}

/// The exact unknowns of a radiating multipole and incident traces equal to
/// its negative, so the total field vanishes on the sphere.
pub fn multipole_traces(spec: &MultipoleSpec, ctx: &WaveContext, lmax: usize) -> Result<(ScatterSolution, IncidentTraces)> {
    let tr = multipole_field_traces(spec, Radial::Hankel, ctx.k(), lmax)?;
    let exact = ScatterSolution {
        context: *ctx,
        dn_es: tr.radial.clone(),
        en: tr.normal.clone(),
        tail_mass: 0.0,
    };
    // With E^i = -E^s the tangential projection n x (n x E^i) is the
    // tangential part of E^s.
    let tangential = tr
        .value
        .components()
        .iter()
        .zip(Axis::ALL)
        .map(|(v, a)| v.sub(&crate::lift::apply_lift(a, &tr.normal)).resized(lmax))
        .collect();
    let neg = |v: &VectorCoeffField| -> Result<VectorCoeffField> {
        VectorCoeffField::new(v.components().iter().map(|c| c.scale((-1.0).into())).collect())
    };
    let incident = IncidentTraces::new(VectorCoeffField::new(tangential)?, neg(&tr.radial)?, neg(&tr.value)?)?;
    Ok((exact, incident))
}

/// Scattered coefficients for a regular incident multipole on a perfectly
/// conducting unit sphere.
pub fn mie_scattered(incident: &MultipoleSpec, k: f64) -> Result<MultipoleSpec> {
    let lmax = incident.max_degree() + 1;
    let t = SphBesselTable::new(lmax, k)?;
    let terms = incident
        .terms
        .iter()
        .map(|term| {
            let l = term.l;
            let lf = l as f64;
            let j = |n: usize| t.j(n).to_f64();
            let a = -term.a * j(l) / t.h(l)?;
            let num = (lf + 1.0) * j(l - 1) - lf * j(l + 1);
            let den = (lf + 1.0) * t.h(l - 1)? - lf * t.h(l + 1)?;
            Ok(MultipoleTerm {
                l,
                m: term.m,
                a,
                b: -term.b * num / den,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    MultipoleSpec::new(terms)
}

/// Traces of a regular incident multipole.
pub fn regular_multipole_traces(spec: &MultipoleSpec, ctx: &WaveContext, lmax: usize) -> Result<IncidentTraces> {
    let tr = multipole_field_traces(spec, Radial::Bessel, ctx.k(), lmax)?;
    IncidentTraces::from_trace(tr.radial, tr.value)
}
