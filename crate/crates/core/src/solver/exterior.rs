//! Evaluation of the scattered field away from the sphere.
//!
//! Each Cartesian component radiates, so Green's representation
//! `E^s_j = DL[E^s_j] - SL[dn E^s_j]` holds, and on harmonic modes the layer
//! potentials are
//! `SL[Y](r x) = i k j_l(k) h_l(k r) Y(x)` and
//! `DL[Y](r x) = i k^2 j_l'(k) h_l(k r) Y(x)`.
//! The products `j_l(k) h_l(kr)` decay like `r^-(l+1)` even where each factor
//! leaves the double range, so they are formed in extended range.

use num_complex::Complex64;

use super::incident::angles;
use super::{IncidentTraces, ScatterSolution};
use crate::error::{Error, Result};
use crate::harmonics::synthesize;
use crate::specfun::{Scaled, SphBesselTable};
use crate::spectra::WaveContext;

/// `a * (j + i y)` for extended-range parts, rounded to `f64`.
fn times_hankel(a: Scaled, j: Scaled, y: Scaled) -> Complex64 {
    Complex64::new((a * j).to_f64(), (a * y).to_f64())
}

/// `E^s` at an exterior point given in Cartesian coordinates.
pub fn evaluate_scattered(
    sol: &ScatterSolution,
    traces: &IncidentTraces,
    point: [f64; 3],
    ctx: &WaveContext,
) -> Result<[Complex64; 3]> {
    let r = (point[0] * point[0] + point[1] * point[1] + point[2] * point[2]).sqrt();
    if !(r > 1.0 && r.is_finite()) {
        return Err(Error::Domain(format!("exterior evaluation needs r > 1, got r = {r}")));
    }
    let dirichlet = sol.dirichlet(traces)?;
    let lmax = dirichlet.lmax().max(sol.lmax());
    let k = ctx.k();
    let on = SphBesselTable::new(lmax, k)?;
    let out = SphBesselTable::new(lmax, k * r)?;
    let (th, ph) = angles([point[0] / r, point[1] / r, point[2] / r]);
    let i = Complex64::i();
    let dl: Vec<Complex64> = (0..=lmax)
        .map(|l| i * k * k * times_hankel(on.dj(l), out.j(l), out.y(l)))
        .collect();
    let sl: Vec<Complex64> = (0..=lmax)
        .map(|l| i * k * times_hankel(on.j(l), out.j(l), out.y(l)))
        .collect();
    let mut e = [Complex64::new(0.0, 0.0); 3];
    for (j, ej) in e.iter_mut().enumerate() {
        let d = dirichlet.component(j).resized(lmax).map_degree(|l| dl[l]);
        let n = sol.dn_es.component(j).resized(lmax).map_degree(|l| sl[l]);
        *ej = synthesize(&d.sub(&n), th, ph);
    }
    Ok(e)
}
