//! Dense truncated matrices of both formulations and a complex LU solve.
//!
//! Multiplication by `x_j` is tabulated here by quadrature, not by the lift
//! formulas, so the dense path shares only the diagonal spectra with the
//! production solver. Products of truncated multiplication matrices are
//! exact as long as the truncation exceeds the degree of every intermediate
//! field, which holds when `lmax >= data degree + 5`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::harmonics::{analyze_values, make_grid, synthesize_grid, CoeffField, HarmonicIndex, VectorCoeffField};
use crate::solver::{Formulation, IncidentTraces, ScatterSolution, SolverOperators};
use crate::spectra::WaveContext;

type Mat = DMatrix<Complex64>;

/// Matrices of multiplication by `x_1, x_2, x_3`, truncated to degree
/// `lmax`, from quadrature.
pub fn multiplication_matrices(lmax: usize) -> Result<[Mat; 3]> {
    let n = (lmax + 1) * (lmax + 1);
    let grid = make_grid(lmax + 1);
    let points = grid.points();
    let columns: Vec<[Vec<Complex64>; 3]> = (0..n)
        .into_par_iter()
        .map(|c| {
            let y = synthesize_grid(&CoeffField::delta(lmax, HarmonicIndex::from_linear(c)), &grid);
            let col = |j: usize| -> Result<Vec<Complex64>> {
                let v: Vec<Complex64> = y.iter().zip(&points).map(|(a, p)| a * p[j]).collect();
                Ok(analyze_values(&v, &grid, lmax, lmax + 1)?.as_slice().to_vec())
            };
            Ok([col(0)?, col(1)?, col(2)?])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(std::array::from_fn(|j| Mat::from_fn(n, n, |r, c| columns[c][j][r])))
}

fn diag(values: &[Complex64], lmax: usize) -> Mat {
    let n = (lmax + 1) * (lmax + 1);
    Mat::from_fn(n, n, |r, c| {
        if r == c {
            values[HarmonicIndex::from_linear(r).ell]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// A block matrix acting on `ncomp` coefficient fields of degree `lmax`.
#[derive(Clone, Debug)]
pub struct DenseOperatorMatrix {
    lmax: usize,
    ncomp: usize,
    matrix: Mat,
}

impl DenseOperatorMatrix {
    fn from_blocks(lmax: usize, blocks: &[Vec<Mat>]) -> Self {
        let n = (lmax + 1) * (lmax + 1);
        let ncomp = blocks.len();
        let mut matrix = Mat::zeros(n * ncomp, n * ncomp);
        for (i, row) in blocks.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                matrix.view_mut((i * n, j * n), (n, n)).copy_from(b);
            }
        }
        DenseOperatorMatrix { lmax, ncomp, matrix }
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn ncomp(&self) -> usize {
        self.ncomp
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    fn to_vector(&self, v: &VectorCoeffField) -> Result<nalgebra::DVector<Complex64>> {
        if v.len() != self.ncomp {
            return Err(Error::InvalidInput(format!(
                "dense operator acts on {} components, got {}",
                self.ncomp,
                v.len()
            )));
        }
        if v.lmax() > self.lmax {
            return Err(Error::Truncation(format!(
                "dense operator truncated at degree {}, field has degree {}",
                self.lmax,
                v.lmax()
            )));
        }
        Ok(nalgebra::DVector::from_iterator(
            self.matrix.nrows(),
            v.components().iter().flat_map(|c| c.resized(self.lmax).as_slice().to_vec()),
        ))
    }

    fn from_vector(&self, x: &nalgebra::DVector<Complex64>) -> Result<VectorCoeffField> {
        let n = (self.lmax + 1) * (self.lmax + 1);
        VectorCoeffField::new(
            (0..self.ncomp)
                .map(|i| CoeffField::from_dense(x.rows(i * n, n).iter().copied().collect()))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn apply(&self, v: &VectorCoeffField) -> Result<VectorCoeffField> {
        self.from_vector(&(&self.matrix * self.to_vector(v)?))
    }

    /// Solves with partial-pivot LU.
    pub fn solve(&self, rhs: &VectorCoeffField) -> Result<VectorCoeffField> {
        let b = self.to_vector(rhs)?;
        let x = self
            .matrix
            .clone()
            .lu()
            .solve(&b)
            .ok_or_else(|| Error::Degenerate {
                label: "dense LU".into(),
                ell: 0,
                modulus: 0.0,
            })?;
        self.from_vector(&x)
    }
}

struct DenseParts {
    m: [Mat; 3],
    d: Mat,
    ieta_n: Mat,
    scal: Mat,
    identity: Mat,
}

impl DenseParts {
    fn new(ctx: &WaveContext, lmax: usize) -> Result<Self> {
        let ops = SolverOperators::new(*ctx, lmax)?;
        let ieta = Complex64::new(0.0, ctx.eta());
        let n_vals: Vec<Complex64> = ops.combined_n_inverse().values().iter().map(|v| v * ieta).collect();
        let n = (lmax + 1) * (lmax + 1);
        Ok(DenseParts {
            m: multiplication_matrices(lmax)?,
            d: diag(ops.combined_d().values(), lmax),
            ieta_n: diag(&n_vals, lmax),
            scal: diag(ops.scal().values(), lmax),
            identity: Mat::identity(n, n),
        })
    }

    fn zero(&self) -> Mat {
        Mat::zeros(self.identity.nrows(), self.identity.ncols())
    }
}

/// The reduced operator of one formulation: `I_3 + S [1/2 n n^T]` or
/// `I_4 - S u v^T`.
pub fn dense_assemble(formulation: Formulation, ctx: &WaveContext, lmax: usize) -> Result<DenseOperatorMatrix> {
    let p = DenseParts::new(ctx, lmax)?;
    let blocks: Vec<Vec<Mat>> = match formulation {
        Formulation::One => (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        let b = &p.scal * (&p.m[i] * &p.m[j]) * Complex64::new(0.5, 0.0);
                        if i == j { &p.identity + b } else { b }
                    })
                    .collect()
            })
            .collect(),
        Formulation::Two => {
            let u = |i: usize| if i < 3 { p.m[i].clone() } else { p.identity.clone() };
            let v = |j: usize| if j < 3 { -p.m[j].clone() } else { p.identity.clone() };
            (0..4)
                .map(|i| {
                    (0..4)
                        .map(|j| {
                            let b = -(&p.scal * (u(i) * v(j)));
                            if i == j { &p.identity + b } else { b }
                        })
                        .collect()
                })
                .collect()
        }
    };
    Ok(DenseOperatorMatrix::from_blocks(lmax, &blocks))
}

/// Dense matrix of `psi -> n . S(eta)[n psi]` on degrees `<= lmax`, built
/// from quadrature multiplication matrices one degree wider so that the
/// intermediate fields `x_j psi` are not truncated.
pub fn dense_sn_matrix(ctx: &WaveContext, lmax: usize) -> Result<Mat> {
    let wide = lmax + 1;
    let m = multiplication_matrices(wide)?;
    let scal = crate::spectra::DiagonalOperator::new(*ctx, crate::spectra::OperatorKind::Scal, wide)?;
    let s = diag(scal.values(), wide);
    let full = m.iter().fold(Mat::zeros(s.nrows(), s.ncols()), |acc, mj| acc + mj * &s * mj);
    let n = (lmax + 1) * (lmax + 1);
    Ok(full.view((0, 0), (n, n)).into_owned())
}

/// Solves the full, unreduced system of one formulation by dense LU at
/// truncation `lmax`.
pub fn dense_solve(formulation: Formulation, traces: &IncidentTraces, ctx: &WaveContext, lmax: usize) -> Result<ScatterSolution> {
    if traces.lmax() > lmax {
        return Err(Error::Truncation(format!(
            "dense truncation {lmax} below data degree {}",
            traces.lmax()
        )));
    }
    let p = DenseParts::new(ctx, lmax)?;
    let vec_of = |c: &CoeffField| nalgebra::DVector::from_column_slice(c.resized(lmax).as_slice());
    let field_of = |v: nalgebra::DVector<Complex64>| CoeffField::from_dense(v.as_slice().to_vec());
    let et: Vec<_> = traces.e_tangential.components().iter().map(vec_of).collect();
    let dn: Vec<_> = traces.dn_e.components().iter().map(vec_of).collect();
    let e: Vec<_> = traces.e_trace.components().iter().map(vec_of).collect();
    let n_dot = |v: &[nalgebra::DVector<Complex64>]| -> nalgebra::DVector<Complex64> {
        (0..3).map(|j| &p.m[j] * &v[j]).fold(nalgebra::DVector::zeros(v[0].len()), |a, b| a + b)
    };
    let half = Complex64::new(0.5, 0.0);
    match formulation {
        Formulation::One => {
            let blocks: Vec<Vec<Mat>> = (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| {
                            let b = &p.ieta_n * (&p.m[i] * &p.m[j]) * half;
                            if i == j { &p.d + b } else { b }
                        })
                        .collect()
                })
                .collect();
            let a = DenseOperatorMatrix::from_blocks(lmax, &blocks);
            let ndn = n_dot(&dn);
            let rhs = (0..3)
                .map(|j| field_of(-(&p.ieta_n * (&e[j] + &p.m[j] * &ndn * half))))
                .collect::<Result<Vec<_>>>()?;
            let psi = a.solve(&VectorCoeffField::new(rhs)?)?;
            let psi_v: Vec<_> = psi.components().iter().map(vec_of).collect();
            let en = -(n_dot(&psi_v) * half) - n_dot(&dn) * half - n_dot(&e);
            Ok(ScatterSolution {
                context: *ctx,
                dn_es: psi,
                en: field_of(en)?,
                tail_mass: 0.0,
            })
        }
        Formulation::Two => {
            let mut blocks = vec![vec![p.zero(); 4]; 4];
            let mut mm = p.zero();
            for i in 0..3 {
                blocks[i][i] = p.d.clone();
                blocks[i][3] = -(&p.ieta_n * &p.m[i]);
                blocks[3][i] = &p.d * &p.m[i];
                mm += &p.m[i] * &p.m[i];
            }
            blocks[3][3] = &p.d - &p.ieta_n * mm;
            let a = DenseOperatorMatrix::from_blocks(lmax, &blocks);
            let mut rhs = (0..3).map(|j| field_of(&p.ieta_n * &et[j])).collect::<Result<Vec<_>>>()?;
            rhs.push(field_of(&p.ieta_n * n_dot(&et))?);
            let u = a.solve(&VectorCoeffField::new(rhs)?)?.into_components();
            let mut it = u.into_iter();
            let dn_es = VectorCoeffField::new(it.by_ref().take(3).collect())?;
            Ok(ScatterSolution {
                context: *ctx,
                dn_es,
                en: it.next().expect("four components"),
                tail_mass: 0.0,
            })
        }
    }
}
