//! Incident-field traces on the unit sphere.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::{CoeffField, HarmonicIndex, VectorCoeffField};
use crate::lift::{dot_normal, times_normal};
use crate::specfun::{sph_harmonic, SphBesselTable};
use crate::spectra::WaveContext;

/// Cartesian traces of the incident field: the tangential projection
/// `E^i_t = n x (n x E^i)`, the normal derivative and the full trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TracesJson")]
pub struct IncidentTraces {
    pub e_tangential: VectorCoeffField,
    pub dn_e: VectorCoeffField,
    pub e_trace: VectorCoeffField,
}

#[derive(Deserialize)]
struct TracesJson {
    e_tangential: VectorCoeffField,
    dn_e: VectorCoeffField,
    e_trace: VectorCoeffField,
}

impl TryFrom<TracesJson> for IncidentTraces {
    type Error = Error;
    fn try_from(t: TracesJson) -> Result<Self> {
        IncidentTraces::new(t.e_tangential, t.dn_e, t.e_trace)
    }
}

impl IncidentTraces {
    pub fn new(e_tangential: VectorCoeffField, dn_e: VectorCoeffField, e_trace: VectorCoeffField) -> Result<Self> {
        for (v, name) in [(&e_tangential, "tangential trace"), (&dn_e, "normal derivative"), (&e_trace, "trace")] {
            if v.len() != 3 {
                return Err(Error::InvalidInput(format!("incident {name} needs 3 components, got {}", v.len())));
            }
        }
        if e_tangential.lmax() != dn_e.lmax() || dn_e.lmax() != e_trace.lmax() {
            return Err(Error::InvalidInput("incident traces have different truncations".into()));
        }
        Ok(IncidentTraces {
            e_tangential,
            dn_e,
            e_trace,
        })
    }

    pub fn zeros(lmax: usize) -> Self {
        let z = VectorCoeffField::zeros(3, lmax).expect("three components");
        IncidentTraces {
            e_tangential: z.clone(),
            dn_e: z.clone(),
            e_trace: z,
        }
    }

    /// Builds the tangential part from the trace as `n (n . E) - E`, exactly
    /// in coefficient space. The result has degree `lmax + 2`.
    pub fn from_trace(dn_e: VectorCoeffField, e_trace: VectorCoeffField) -> Result<Self> {
        if e_trace.len() != 3 {
            return Err(Error::InvalidInput("incident trace needs 3 components".into()));
        }
        let l = e_trace.lmax().max(dn_e.lmax()) + 2;
        let nne = times_normal(&dot_normal(e_trace.components())?);
        let et = nne
            .iter()
            .zip(e_trace.components())
            .map(|(a, b)| a.sub(b).resized(l))
            .collect();
        Self::new(VectorCoeffField::new(et)?, dn_e.resized(l), e_trace.resized(l))
    }

    pub fn lmax(&self) -> usize {
        self.e_trace.lmax()
    }

    /// The same traces with every component negated.
    pub fn negated(&self) -> Self {
        let neg = |v: &VectorCoeffField| {
            VectorCoeffField::new(v.components().iter().map(|c| c.scale((-1.0).into())).collect())
                .expect("shape preserved")
        };
        IncidentTraces {
            e_tangential: neg(&self.e_tangential),
            dn_e: neg(&self.dn_e),
            e_trace: neg(&self.e_trace),
        }
    }
}

/// Unit-vector angles `(theta, phi)`.
pub(crate) fn angles(d: [f64; 3]) -> (f64, f64) {
    (d[2].clamp(-1.0, 1.0).acos(), d[1].atan2(d[0]))
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Traces of `E^i = p e^{i k d . x}` on the unit sphere from the
/// Jacobi-Anger expansion
/// `e^{i k d . x} = 4 pi sum i^l j_l(k r) conj(Y_l^m(d)) Y_l^m(x)`,
/// truncated at `lmax`. The tangential part is formed exactly, so the
/// returned traces have degree `lmax + 2`.
pub fn plane_wave_traces(direction: [f64; 3], polarization: [f64; 3], ctx: &WaveContext, lmax: usize) -> Result<IncidentTraces> {
    for (v, name) in [(direction, "direction"), (polarization, "polarization")] {
        if (dot(v, v).sqrt() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("plane-wave {name} must be a unit vector")));
        }
    }
    let pd = dot(direction, polarization);
    if pd.abs() > 1e-12 {
        return Err(Error::InvalidInput(format!(
            "plane-wave polarization must be orthogonal to the direction, p . d = {pd:e}"
        )));
    }
    let k = ctx.k();
    let bessel = SphBesselTable::new(lmax, k)?;
    let (td, pdir) = angles(direction);
    let mut value = CoeffField::zeros(lmax);
    let mut radial = CoeffField::zeros(lmax);
    let mut il = Complex64::new(1.0, 0.0);
    for l in 0..=lmax {
        let (j, dj) = (bessel.j(l).to_f64(), bessel.dj(l).to_f64());
        for m in -(l as isize)..=(l as isize) {
            let idx = HarmonicIndex { ell: l, m };
            let base = 4.0 * std::f64::consts::PI * il * sph_harmonic(idx, td, pdir).conj();
            value.set(idx, base * j);
            radial.set(idx, base * k * dj);
        }
        il *= Complex64::i();
    }
    let comp = |f: &CoeffField| VectorCoeffField::new(polarization.iter().map(|&p| f.scale(p.into())).collect());
    IncidentTraces::from_trace(comp(&radial)?, comp(&value)?)
}
