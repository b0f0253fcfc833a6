//! Direct numerical application of the single and double layer operators.
//!
//! The target `x` is rotated to the pole of a local frame. In the polar
//! angle `t` about `x` the distance is `R = 2 sin(t/2)` and the area element
//! is `sin t dt dp = R cos(t/2) dt dp`, which cancels the `1/R` singularity:
//!
//! ```text
//! S:  G ds          = e^{ikR} cos(t/2) / (4 pi)            dt dp
//! K:  dG/dn_y ds    = e^{ikR} (ikR - 1) cos(t/2) / (8 pi)  dt dp
//! ```
//!
//! using `(y - x) . n_y = R^2 / 2` on the unit sphere. Both integrands are
//! smooth, so Gauss-Legendre in `t` and the trapezoid rule in `p` converge
//! spectrally.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::harmonics::{gauss_legendre, synthesize, CoeffField};
use crate::spectra::WaveContext;

/// Which layer operator to integrate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LayerKind {
    Single,
    Double,
}

/// Node counts used by [`quad_apply_layer`].
pub const DEFAULT_NODES: (usize, usize) = (120, 240);

/// Orthonormal frame `(e1, e2, x)` for a unit vector `x`.
fn frame(x: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let helper = if x[2].abs() < 0.9 { [0.0, 0.0, 1.0] } else { [1.0, 0.0, 0.0] };
    let cross = |a: [f64; 3], b: [f64; 3]| [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    let e1 = cross(helper, x);
    let n = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    let e1 = e1.map(|v| v / n);
    (e1, cross(x, e1))
}

/// `K[density](x)` or `S[density](x)` for `x` on the unit sphere, at the
/// default resolution.
pub fn quad_apply_layer(kind: LayerKind, density: &CoeffField, x: [f64; 3], ctx: &WaveContext) -> Complex64 {
    quad_apply_layer_with(kind, |y| {
        let th = y[2].clamp(-1.0, 1.0).acos();
        synthesize(density, th, y[1].atan2(y[0]))
    }, x, ctx, DEFAULT_NODES)
}

/// As [`quad_apply_layer`] for a pointwise density and explicit node
/// counts `(n_t, n_p)`.
pub fn quad_apply_layer_with<F>(kind: LayerKind, density: F, x: [f64; 3], ctx: &WaveContext, nodes: (usize, usize)) -> Complex64
where
    F: Fn([f64; 3]) -> Complex64 + Sync,
{
    let norm = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let x = x.map(|v| v / norm);
    let (e1, e2) = frame(x);
    let (n_t, n_p) = nodes;
    let (gx, gw) = gauss_legendre(n_t);
    let k = ctx.k();
    let half_pi = std::f64::consts::FRAC_PI_2;
    let dp = 2.0 * std::f64::consts::PI / n_p as f64;
    gx.par_iter()
        .zip(gw.par_iter())
        .map(|(&u, &w)| {
            let t = half_pi * (u + 1.0);
            let r = 2.0 * (0.5 * t).sin();
            let phase = Complex64::from_polar(1.0, k * r);
            let kernel = match kind {
                LayerKind::Single => phase * (0.5 * t).cos() / (4.0 * std::f64::consts::PI),
                LayerKind::Double => {
                    phase * Complex64::new(-1.0, k * r) * (0.5 * t).cos() / (8.0 * std::f64::consts::PI)
                }
            };
            let (st, ct) = t.sin_cos();
            let ring: Complex64 = (0..n_p)
                .map(|j| {
                    let (sp, cp) = (j as f64 * dp).sin_cos();
                    let y: [f64; 3] = std::array::from_fn(|i| st * (cp * e1[i] + sp * e2[i]) + ct * x[i]);
                    density(y)
                })
                .sum();
            kernel * ring * (w * half_pi * dp)
        })
        .sum()
}
