//! Tensor Gauss-Legendre x uniform-azimuth quadrature on the unit sphere.

use std::f64::consts::PI;

use serde::Serialize;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// `P_n` from the Chebyshev-like initial guesses. Nodes ascend.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(z) and P_n'(z) by the three-term recurrence.
            let (mut p0, mut p1) = (1.0, z);
            if n == 1 {
                p1 = z;
                p0 = 1.0;
            } else {
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Product grid with `n_theta` Gauss-Legendre colatitudes and `n_phi`
/// equispaced longitudes. Weights include the area element, so they sum to
/// `4 pi`.
#[derive(Clone, Debug, Serialize)]
pub struct QuadratureGrid {
    n_theta: usize,
    n_phi: usize,
    theta: Vec<f64>,
    theta_weight: Vec<f64>,
    phi: Vec<f64>,
}

impl QuadratureGrid {
    pub fn with_sizes(n_theta: usize, n_phi: usize) -> Self {
        assert!(n_theta >= 1 && n_phi >= 1, "grid sizes must be positive");
        let (x, w) = gauss_legendre(n_theta);
        // Colatitude ascends from the north pole, i.e. x = cos(theta) descends.
        let theta: Vec<f64> = x.iter().rev().map(|&c| c.acos()).collect();
        let theta_weight: Vec<f64> = w.into_iter().rev().collect();
        let phi = (0..n_phi)
            .map(|j| 2.0 * PI * j as f64 / n_phi as f64)
            .collect();
        QuadratureGrid {
            n_theta,
            n_phi,
            theta,
            theta_weight,
            phi,
        }
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn thetas(&self) -> &[f64] {
        &self.theta
    }

    pub fn phis(&self) -> &[f64] {
        &self.phi
    }

    /// Gauss weight of colatitude row `i` (in `cos theta`).
    pub fn theta_weight(&self, i: usize) -> f64 {
        self.theta_weight[i]
    }

    pub fn phi_weight(&self) -> f64 {
        2.0 * PI / self.n_phi as f64
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Highest total polynomial degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        (2 * self.n_theta - 1).min(self.n_phi - 1)
    }

    /// `(theta, phi, weight)` in row-major (colatitude-major) order.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let wp = self.phi_weight();
        self.theta.iter().zip(&self.theta_weight).flat_map(move |(&t, &wt)| {
            self.phi.iter().map(move |&p| (t, p, wt * wp))
        })
    }

    /// Cartesian coordinates of every node, in node order.
    pub fn points(&self) -> Vec<[f64; 3]> {
        self.nodes()
            .map(|(t, p, _)| {
                let (st, ct) = t.sin_cos();
                let (sp, cp) = p.sin_cos();
                [st * cp, st * sp, ct]
            })
            .collect()
    }
}

/// Grid integrating `Y_l^m conj(Y_l'^m')` exactly for `l, l' <= lmax`.
pub fn make_grid(lmax: usize) -> QuadratureGrid {
    QuadratureGrid::with_sizes(lmax + 1, 2 * lmax + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_sphere_area() {
        for lmax in [0, 1, 7, 30] {
            let g = make_grid(lmax);
            let s: f64 = g.nodes().map(|n| n.2).sum();
            assert!((s - 4.0 * PI).abs() < 1e-12, "lmax={lmax}");
        }
    }

    #[test]
    fn gauss_legendre_integrates_monomials() {
        let (x, w) = gauss_legendre(9);
        for p in 0..=17 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p)).sum();
            let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-14, "p={p}");
        }
    }

    #[test]
    fn second_moment_of_x3() {
        let g = make_grid(10);
        let q: f64 = g.nodes().map(|(t, _, w)| w * t.cos().powi(2)).sum();
        assert!((q - 4.0 * PI / 3.0).abs() < 1e-12);
        assert_eq!(g.exact_degree(), 20);
    }
}
