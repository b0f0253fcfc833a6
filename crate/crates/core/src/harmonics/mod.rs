//! Quadrature on the unit sphere and the forward/inverse spherical harmonic
//! transforms between point values and [`CoeffField`] coefficients.
//!
//! Both transforms factor through the azimuthal Fourier series: on each
//! colatitude row a direct discrete Fourier sum separates the orders, then
//! the orthonormal Legendre table couples the degrees.

mod field;
mod grid;

pub use field::{CoeffField, VectorCoeffField};
pub use grid::{gauss_legendre, make_grid, QuadratureGrid};
pub use crate::specfun::HarmonicIndex;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::specfun::LegendreTable;

/// Phase `c_m` in `Y_l^m = c_m Pbar_l^{|m|}(cos theta) e^{i m phi}`.
#[inline]
fn order_phase(m: isize) -> f64 {
    if m < 0 && m % 2 != 0 {
        -1.0
    } else {
        1.0
    }
}

fn check_exactness(grid: &QuadratureGrid, lmax: usize, bandwidth: usize) -> Result<()> {
    let required = lmax + bandwidth;
    if grid.exact_degree() < required {
        return Err(Error::GridTooSmall {
            exact: grid.exact_degree(),
            required,
        });
    }
    Ok(())
}

/// Projects `f` onto `Y_l^m`, `l <= lmax`. `bandwidth` is the declared
/// degree of `f`; the grid must integrate degree `lmax + bandwidth` exactly.
pub fn analyze<F>(f: F, grid: &QuadratureGrid, lmax: usize, bandwidth: usize) -> Result<CoeffField>
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    let values: Vec<Complex64> = grid.nodes().map(|(t, p, _)| f(t, p)).collect();
    analyze_values(&values, grid, lmax, bandwidth)
}

/// As [`analyze`], from values already sampled at the grid nodes.
pub fn analyze_values(
    values: &[Complex64],
    grid: &QuadratureGrid,
    lmax: usize,
    bandwidth: usize,
) -> Result<CoeffField> {
    check_exactness(grid, lmax, bandwidth)?;
    if values.len() != grid.len() {
        return Err(Error::InvalidInput(format!(
            "{} samples for a grid of {} nodes",
            values.len(),
            grid.len()
        )));
    }
    let n_phi = grid.n_phi();
    let wp = grid.phi_weight();
    let twiddle = twiddles(grid, lmax, -1.0);
    let rows: Vec<CoeffField> = (0..grid.n_theta())
        .into_par_iter()
        .map(|i| {
            let row = &values[i * n_phi..(i + 1) * n_phi];
            let table = LegendreTable::new(lmax, grid.thetas()[i]);
            let w = grid.theta_weight(i) * wp;
            let mut out = CoeffField::zeros(lmax);
            for (m, tw) in (-(lmax as isize)..=(lmax as isize)).zip(twiddle.chunks(n_phi)) {
                let fm: Complex64 = row.iter().zip(tw).map(|(v, e)| v * e).sum();
                let s = fm * (w * order_phase(m));
                let ma = m.unsigned_abs();
                for l in ma..=lmax {
                    out.add_at(HarmonicIndex { ell: l, m }, s * table.value(l, ma));
                }
            }
            out
        })
        .collect();
    Ok(rows
        .iter()
        .fold(CoeffField::zeros(lmax), |acc, r| acc.add(r)))
}

/// `e^{sign i m phi_j}` for `-lmax <= m <= lmax`, one row of `n_phi` per order.
fn twiddles(grid: &QuadratureGrid, lmax: usize, sign: f64) -> Vec<Complex64> {
    (-(lmax as isize)..=(lmax as isize))
        .flat_map(|m| {
            grid.phis()
                .iter()
                .map(move |&p| Complex64::from_polar(1.0, sign * m as f64 * p))
        })
        .collect()
}

/// `sum c_l^m Y_l^m(theta, phi)`.
pub fn synthesize(c: &CoeffField, theta: f64, phi: f64) -> Complex64 {
    let lmax = c.lmax();
    let table = LegendreTable::new(lmax, theta);
    let mut acc = Complex64::new(0.0, 0.0);
    for m in -(lmax as isize)..=(lmax as isize) {
        let ma = m.unsigned_abs();
        let mut g = Complex64::new(0.0, 0.0);
        for l in ma..=lmax {
            g += c.get(HarmonicIndex { ell: l, m }) * table.value(l, ma);
        }
        acc += g * order_phase(m) * Complex64::from_polar(1.0, m as f64 * phi);
    }
    acc
}

/// Point values of `c` at every grid node, in node order.
pub fn synthesize_grid(c: &CoeffField, grid: &QuadratureGrid) -> Vec<Complex64> {
    let lmax = c.lmax();
    let n_phi = grid.n_phi();
    let twiddle = twiddles(grid, lmax, 1.0);
    grid.thetas()
        .par_iter()
        .flat_map_iter(|&t| {
            let table = LegendreTable::new(lmax, t);
            let mut row = vec![Complex64::new(0.0, 0.0); n_phi];
            for (m, tw) in (-(lmax as isize)..=(lmax as isize)).zip(twiddle.chunks(n_phi)) {
                let ma = m.unsigned_abs();
                let s: Complex64 = (ma..=lmax)
                    .map(|l| c.get(HarmonicIndex { ell: l, m }) * table.value(l, ma))
                    .sum::<Complex64>()
                    * order_phase(m);
                for (r, e) in row.iter_mut().zip(tw) {
                    *r += s * e;
                }
            }
            row
        })
        .collect()
}

/// `int f conj(g) ds` by quadrature over point values.
pub fn inner_product(f: &[Complex64], g: &[Complex64], grid: &QuadratureGrid) -> Complex64 {
    grid.nodes()
        .zip(f.iter().zip(g))
        .map(|((_, _, w), (a, b))| a * b.conj() * w)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::sph_harmonic;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn random_field(lmax: usize, seed: &[f64]) -> CoeffField {
        CoeffField::from_fn(lmax, |i| {
            let k = i.linear();
            Complex64::new(seed[(2 * k) % seed.len()], seed[(2 * k + 1) % seed.len()])
        })
    }

    #[test]
    fn gram_matrix_is_identity() {
        for lmax in [10usize, 30] {
            let grid = make_grid(lmax);
            // Row i of the Gram matrix is the analysis of Y_i.
            let mut worst: f64 = 0.0;
            for i in HarmonicIndex::iter_upto(lmax) {
                let row = analyze(|t, p| sph_harmonic(i, t, p), &grid, lmax, lmax).unwrap();
                let e = CoeffField::delta(lmax, i);
                worst = worst.max(row.sub(&e).max_abs());
            }
            assert!(worst < 1e-12, "lmax={lmax}: {worst}");
        }
    }

    #[test]
    fn analyze_reference_functions() {
        let grid = make_grid(8);
        let y32 = HarmonicIndex::new(3, 2).unwrap();
        let c = analyze(|t, p| sph_harmonic(y32, t, p), &grid, 5, 3).unwrap();
        for (i, v) in c.iter() {
            let e = if i == y32 { 1.0 } else { 0.0 };
            assert!((v - e).norm() < 1e-12);
        }
        let x3 = analyze(|t, _| t.cos().into(), &grid, 3, 1).unwrap();
        let c10 = x3.get(HarmonicIndex::new(1, 0).unwrap());
        assert!((c10.re - (4.0 * PI / 3.0).sqrt()).abs() < 1e-12);
        assert!(x3.sub(&CoeffField::delta(3, HarmonicIndex::new(1, 0).unwrap()).scale(c10)).norm() < 1e-12);
        let one = analyze(|_, _| 1.0.into(), &grid, 2, 0).unwrap();
        assert!((one.get(HarmonicIndex::new(0, 0).unwrap()).re - (4.0 * PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn grid_too_small_is_reported() {
        let grid = make_grid(4);
        assert!(analyze(|_, _| 1.0.into(), &grid, 4, 4).is_ok());
        let err = analyze(|_, _| 1.0.into(), &grid, 4, 5).unwrap_err();
        assert!(matches!(err, Error::GridTooSmall { exact: 8, required: 9 }));
    }

    #[test]
    fn synthesize_reference_values() {
        let d = CoeffField::delta(0, HarmonicIndex::new(0, 0).unwrap());
        assert!((synthesize(&d, 0.3, 1.0).re - 0.2820947918).abs() < 1e-10);
        let mut two = CoeffField::zeros(2);
        two.set(HarmonicIndex::new(1, 0).unwrap(), 1.0.into());
        two.set(HarmonicIndex::new(2, 0).unwrap(), 1.0.into());
        let expect = (3.0 / (4.0 * PI)).sqrt() + (5.0 / (4.0 * PI)).sqrt();
        assert!((synthesize(&two, 0.0, 0.0) - expect).norm() < 1e-14);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn round_trip_and_parseval(seed in prop::collection::vec(-1.0f64..1.0, 8..64), lmax in 0usize..12) {
            let f = random_field(lmax, &seed);
            let grid = make_grid(lmax);
            let vals = synthesize_grid(&f, &grid);
            let back = analyze_values(&vals, &grid, lmax, lmax).unwrap();
            prop_assert!(back.sub(&f).max_abs() <= 1e-12 * f.max_abs().max(1.0));
            let quad: f64 = grid.nodes().zip(&vals).map(|((_, _, w), v)| w * v.norm_sqr()).sum();
            prop_assert!((quad - f.norm_sq()).abs() <= 1e-10 * f.norm_sq().max(1.0));
            let (t, p) = (grid.thetas()[0], grid.phis()[grid.n_phi() / 2]);
            prop_assert!((synthesize(&f, t, p) - vals[grid.n_phi() / 2]).norm() < 1e-12 * f.norm().max(1.0));
        }

        #[test]
        fn transforms_are_linear(a in prop::collection::vec(-1.0f64..1.0, 16), b in prop::collection::vec(-1.0f64..1.0, 16), s in -2.0f64..2.0) {
            let lmax = 6;
            let (fa, fb) = (random_field(lmax, &a), random_field(lmax, &b));
            let grid = make_grid(lmax);
            let sum = fa.axpy(Complex64::new(s, 0.5), &fb);
            let va = synthesize_grid(&fa, &grid);
            let vb = synthesize_grid(&fb, &grid);
            let vs = synthesize_grid(&sum, &grid);
            for ((x, y), z) in va.iter().zip(&vb).zip(&vs) {
                prop_assert!((x + Complex64::new(s, 0.5) * y - z).norm() < 1e-12);
            }
            let combo: Vec<Complex64> = va.iter().zip(&vb).map(|(x, y)| x + Complex64::new(s, 0.5) * y).collect();
            let back = analyze_values(&combo, &grid, lmax, lmax).unwrap();
            prop_assert!(back.sub(&sum).max_abs() < 1e-12);
        }
    }
}
