//! Field-only formulations for scattering by a perfectly conducting unit
//! sphere.
//!
//! Both formulations are solved exactly in coefficient space. The combined
//! field operators are diagonal, multiplication by the normal is a lift, and
//! the rank-one Woodbury structure reduces each vector system to one scalar
//! diagonal division:
//!
//! ```text
//! formulation 1   psi + S[1/2 n (n . psi)] = f,     f = D^-1 (-i eta N' [E^i + 1/2 n (n . dn E^i)])
//!                 n . psi = (n . f) / lambda1,     psi = f - S[1/2 n (n . psi)]
//!                 E_n = -1/2 n . psi - 1/2 n . dn E^i - n . E^i
//!
//! formulation 2   phi - S[u (v . phi)] = g,        g = D^-1 (i eta N' [E^i_t; x . E^i_t])
//!                 v . phi = (v . g) / lambda2,     phi = g + S[u (v . phi)]
//!                 dn E^s = phi_1..3,               E_n = phi_4 - x . phi_1..3
//! ```
//!
//! with `N' = N(1/eta)`, `S = S(eta)`, `u = (n, 1)`, `v = (-x, 1)` and unit
//! mean curvature. The first formulation reads the incident term as the full
//! trace of `E^i`, which is what eliminating `E^s` through the boundary
//! condition produces.
//!
//! Every lift raises the degree by one. The solvers keep every degree that
//! is produced, so a band-limited right-hand side yields the exact solution
//! of the band-limited problem, a few degrees wider than the data.

mod exterior;
mod incident;

pub use exterior::evaluate_scattered;
pub use incident::{plane_wave_traces, IncidentTraces};

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::{CoeffField, VectorCoeffField};
use crate::lift::{apply_lift, dot_normal, times_normal, Axis};
use crate::spectra::{s_ell_hankel, DiagonalOperator, OperatorKind, SpectralTable, WaveContext};

/// Smallest eigenvalue modulus the diagonal solves accept.
pub const SOLVE_GUARD: f64 = 1e-13;

/// Which field-only formulation to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formulation {
    /// Three unknowns `dn E^s`, normal component from the curvature identity.
    #[serde(rename = "1")]
    One,
    /// Four unknowns `(dn E^s, E^s_n)`.
    #[serde(rename = "2")]
    Two,
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Formulation::One => "1",
            Formulation::Two => "2",
        })
    }
}

impl FromStr for Formulation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(Formulation::One),
            "2" => Ok(Formulation::Two),
            _ => Err(Error::InvalidInput(format!("formulation must be 1 or 2, got {s:?}"))),
        }
    }
}

/// `s_{n,l}`, the eigenvalue of `psi -> n . S[n psi]`.
fn s_normal(s_prev: Complex64, s_next: Complex64, l: usize) -> Complex64 {
    let lf = l as f64;
    let den = 2.0 * lf + 1.0;
    lf / den * s_prev + (lf + 1.0) / den * s_next
}

/// `1 + l/(2(2l+1)) s_{l-1} + (l+1)/(2(2l+1)) s_{l+1}`.
pub fn lambda1(ctx: &WaveContext, ell: usize) -> Complex64 {
    let l = ell as isize;
    1.0 + 0.5 * s_normal(s_ell_hankel(ctx, l - 1), s_ell_hankel(ctx, l + 1), ell)
}

/// `1 + l/(2l+1) s_{l-1} + (l+1)/(2l+1) s_{l+1} - s_l`.
pub fn lambda2(ctx: &WaveContext, ell: usize) -> Complex64 {
    let l = ell as isize;
    1.0 + s_normal(s_ell_hankel(ctx, l - 1), s_ell_hankel(ctx, l + 1), ell) - s_ell_hankel(ctx, l)
}

fn tabulate(table: &SpectralTable, lmax: usize, second: bool) -> Vec<Complex64> {
    (0..=lmax)
        .map(|l| {
            let li = l as isize;
            let sn = s_normal(table.s_hankel(li - 1), table.s_hankel(li + 1), l);
            if second {
                1.0 + sn - table.s_hankel(li)
            } else {
                1.0 + 0.5 * sn
            }
        })
        .collect()
}

/// Smallest modulus in a list of eigenvalues, with its degree.
fn min_modulus(values: &[Complex64]) -> (usize, f64) {
    values
        .iter()
        .map(|v| v.norm())
        .enumerate()
        .fold((0, f64::INFINITY), |best, (l, m)| if m < best.1 { (l, m) } else { best })
}

/// Eigenvalues of the scalar operator of the first formulation.
#[derive(Clone, Debug, Serialize)]
pub struct Formulation1Spectrum {
    context: WaveContext,
    values: Vec<Complex64>,
}

impl Formulation1Spectrum {
    pub fn new(ctx: WaveContext, lmax: usize) -> Self {
        Self::from_table(&SpectralTable::new(ctx, lmax + 1), lmax)
    }

    /// From a table holding at least degree `lmax + 1`.
    pub fn from_table(table: &SpectralTable, lmax: usize) -> Self {
        Formulation1Spectrum {
            context: table.context(),
            values: tabulate(table, lmax, false),
        }
    }

    pub fn context(&self) -> WaveContext {
        self.context
    }

    pub fn lmax(&self) -> usize {
        self.values.len() - 1
    }

    pub fn lambda1(&self, l: usize) -> Complex64 {
        self.values[l]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `(l, |lambda1(l)|)` at the smallest modulus.
    pub fn min_modulus(&self) -> (usize, f64) {
        min_modulus(&self.values)
    }
}

/// Eigenvalues of the scalar operator of the second formulation.
#[derive(Clone, Debug, Serialize)]
pub struct Formulation2Spectrum {
    context: WaveContext,
    values: Vec<Complex64>,
}

impl Formulation2Spectrum {
    pub fn new(ctx: WaveContext, lmax: usize) -> Self {
        Self::from_table(&SpectralTable::new(ctx, lmax + 1), lmax)
    }

    pub fn from_table(table: &SpectralTable, lmax: usize) -> Self {
        Formulation2Spectrum {
            context: table.context(),
            values: tabulate(table, lmax, true),
        }
    }

    pub fn context(&self) -> WaveContext {
        self.context
    }

    pub fn lmax(&self) -> usize {
        self.values.len() - 1
    }

    pub fn lambda2(&self, l: usize) -> Complex64 {
        self.values[l]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn min_modulus(&self) -> (usize, f64) {
        min_modulus(&self.values)
    }

    /// `max l |lambda2(l) - 1|` over `from <= l <= lmax`, with its degree.
    pub fn clustering(&self, from: usize) -> (usize, f64) {
        (from..=self.lmax())
            .map(|l| (l, l as f64 * (self.values[l] - 1.0).norm()))
            .fold((from, 0.0), |best, x| if x.1 > best.1 { x } else { best })
    }
}

/// Diagonal operators used by both formulations, tabulated together.
#[derive(Clone, Debug)]
pub struct SolverOperators {
    ctx: WaveContext,
    d: DiagonalOperator,
    n_inv: DiagonalOperator,
    scal: DiagonalOperator,
    lambda1: DiagonalOperator,
    lambda2: DiagonalOperator,
}

impl SolverOperators {
    /// Every operator to degree `lmax`.
    pub fn new(ctx: WaveContext, lmax: usize) -> Result<Self> {
        let table = SpectralTable::new(ctx, lmax + 1);
        let inv = SpectralTable::new(ctx.inverse_eta(), lmax);
        Ok(SolverOperators {
            ctx,
            d: DiagonalOperator::from_table(&table, OperatorKind::CombinedD, lmax)?,
            n_inv: DiagonalOperator::from_table(&inv, OperatorKind::CombinedN, lmax)?,
            scal: DiagonalOperator::from_table(&table, OperatorKind::Scal, lmax)?,
            lambda1: DiagonalOperator::from_values(ctx, Formulation1Spectrum::from_table(&table, lmax).values)?,
            lambda2: DiagonalOperator::from_values(ctx, Formulation2Spectrum::from_table(&table, lmax).values)?,
        })
    }

    pub fn context(&self) -> WaveContext {
        self.ctx
    }

    pub fn lmax(&self) -> usize {
        self.d.lmax()
    }

    /// `D(eta)`.
    pub fn combined_d(&self) -> &DiagonalOperator {
        &self.d
    }

    /// `N(1/eta)`.
    pub fn combined_n_inverse(&self) -> &DiagonalOperator {
        &self.n_inv
    }

    /// `S(eta)`.
    pub fn scal(&self) -> &DiagonalOperator {
        &self.scal
    }

    /// `i eta N(1/eta) f`.
    fn ieta_n(&self, f: &CoeffField) -> Result<CoeffField> {
        Ok(self.n_inv.apply(f)?.scale(Complex64::new(0.0, self.ctx.eta())))
    }
}

/// Traces of the scattered field on the sphere: `dn E^s_j` and `E^s . n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatterSolution {
    pub context: WaveContext,
    pub dn_es: VectorCoeffField,
    pub en: CoeffField,
    /// Coefficient mass above the degree of the data, relative to the
    /// whole solution.
    pub tail_mass: f64,
}

impl ScatterSolution {
    pub fn lmax(&self) -> usize {
        self.dn_es.lmax()
    }

    /// Coefficient norm of all four unknowns together.
    pub fn norm(&self) -> f64 {
        (self.dn_es.norm().powi(2) + self.en.norm_sq()).sqrt()
    }

    /// Coefficient norm of the difference of all four unknowns.
    pub fn distance(&self, other: &ScatterSolution) -> f64 {
        let dn: f64 = self
            .dn_es
            .components()
            .iter()
            .zip(other.dn_es.components())
            .map(|(a, b)| a.sub(b).norm_sq())
            .sum();
        (dn + self.en.sub(&other.en).norm_sq()).sqrt()
    }

    /// Dirichlet data of the scattered field, `E^s_j = n_j E_n + (E^i_t)_j`.
    pub fn dirichlet(&self, traces: &IncidentTraces) -> Result<VectorCoeffField> {
        let lmax = self.lmax().max(self.en.lmax() + 1).max(traces.lmax());
        let nen = times_normal(&self.en);
        VectorCoeffField::new(
            nen.iter()
                .zip(traces.e_tangential.components())
                .map(|(a, b)| a.add(b).resized(lmax))
                .collect(),
        )
    }

    fn build(ctx: WaveContext, dn: Vec<CoeffField>, en: CoeffField, data_lmax: usize) -> Result<Self> {
        let lmax = dn.iter().map(|c| c.lmax()).chain([en.lmax()]).max().unwrap_or(0);
        let dn_es = VectorCoeffField::new(dn.into_iter().map(|c| c.resized(lmax)).collect())?;
        let en = en.resized(lmax);
        let total = (dn_es.norm().powi(2) + en.norm_sq()).sqrt();
        let tail = (dn_es.tail_norm(data_lmax + 1).powi(2) + en.tail_norm(data_lmax + 1).powi(2)).sqrt();
        Ok(ScatterSolution {
            context: ctx,
            dn_es,
            en,
            tail_mass: if total > 0.0 { tail / total } else { 0.0 },
        })
    }
}

fn scalar_components(v: &VectorCoeffField, n: usize, what: &str) -> Result<()> {
    if v.len() != n {
        return Err(Error::InvalidInput(format!("{what} needs {n} components, got {}", v.len())));
    }
    Ok(())
}

/// Right-hand side `-i eta N(1/eta)[E^i + 1/2 n (n . dn E^i)]`, three
/// components at degree `traces.lmax() + 2`.
pub fn assemble_rhs_f1(traces: &IncidentTraces, ctx: &WaveContext) -> Result<VectorCoeffField> {
    let ops = SolverOperators::new(*ctx, traces.lmax() + 2)?;
    assemble_rhs_f1_with(&ops, traces)
}

pub fn assemble_rhs_f1_with(ops: &SolverOperators, traces: &IncidentTraces) -> Result<VectorCoeffField> {
    let l = traces.lmax() + 2;
    let ndn = dot_normal(traces.dn_e.components())?;
    let nndn = times_normal(&ndn);
    let comps = traces
        .e_trace
        .components()
        .iter()
        .zip(&nndn)
        .map(|(e, c)| {
            let inner = e.axpy(Complex64::new(0.5, 0.0), c).resized(l);
            Ok(ops.ieta_n(&inner)?.scale(Complex64::new(-1.0, 0.0)))
        })
        .collect::<Result<Vec<_>>>()?;
    VectorCoeffField::new(comps)
}

/// Solves the first formulation. The traces supply the incident terms of
/// the normal-component recovery.
pub fn solve_f1(rhs: &VectorCoeffField, traces: &IncidentTraces, ctx: &WaveContext) -> Result<ScatterSolution> {
    let ops = SolverOperators::new(*ctx, rhs.lmax().max(traces.lmax()) + 3)?;
    solve_f1_with(&ops, rhs, traces)
}

pub fn solve_f1_with(ops: &SolverOperators, rhs: &VectorCoeffField, traces: &IncidentTraces) -> Result<ScatterSolution> {
    scalar_components(rhs, 3, "formulation 1 right-hand side")?;
    let f = rhs
        .components()
        .iter()
        .map(|c| ops.d.solve(c, SOLVE_GUARD))
        .collect::<Result<Vec<_>>>()?;
    let psi_n = ops.lambda1.solve(&dot_normal(&f)?, SOLVE_GUARD)?;
    let half_n_psi = times_normal(&psi_n.scale(0.5.into()));
    let psi = f
        .iter()
        .zip(&half_n_psi)
        .map(|(fj, hj)| Ok(fj.sub(&ops.scal.apply(hj)?)))
        .collect::<Result<Vec<_>>>()?;
    let en = psi_n
        .scale((-0.5).into())
        .axpy((-0.5).into(), &dot_normal(traces.dn_e.components())?)
        .sub(&dot_normal(traces.e_trace.components())?);
    ScatterSolution::build(ops.ctx, psi, en, traces.lmax())
}

/// Right-hand side `i eta N(1/eta) M1 [E^i_t; 0]`, four components at
/// degree `traces.lmax() + 1`.
pub fn assemble_rhs_f2(traces: &IncidentTraces, ctx: &WaveContext) -> Result<VectorCoeffField> {
    let ops = SolverOperators::new(*ctx, traces.lmax() + 1)?;
    assemble_rhs_f2_with(&ops, traces)
}

pub fn assemble_rhs_f2_with(ops: &SolverOperators, traces: &IncidentTraces) -> Result<VectorCoeffField> {
    let l = traces.lmax() + 1;
    let et = traces.e_tangential.components();
    let mut rows: Vec<CoeffField> = et.to_vec();
    rows.push(dot_normal(et)?);
    let comps = rows
        .iter()
        .map(|r| ops.ieta_n(&r.resized(l)))
        .collect::<Result<Vec<_>>>()?;
    VectorCoeffField::new(comps)
}

/// Solves the second formulation.
pub fn solve_f2(rhs: &VectorCoeffField, ctx: &WaveContext) -> Result<ScatterSolution> {
    let ops = SolverOperators::new(*ctx, rhs.lmax() + 3)?;
    solve_f2_with(&ops, rhs, rhs.lmax())
}

/// As [`solve_f2`], with `data_lmax` the degree of the incident data used
/// for the tail diagnostic.
pub fn solve_f2_with(ops: &SolverOperators, rhs: &VectorCoeffField, data_lmax: usize) -> Result<ScatterSolution> {
    scalar_components(rhs, 4, "formulation 2 right-hand side")?;
    let g = rhs
        .components()
        .iter()
        .map(|c| ops.d.solve(c, SOLVE_GUARD))
        .collect::<Result<Vec<_>>>()?;
    let gv = g[3].sub(&dot_normal(&g[..3])?);
    let phi_v = ops.lambda2.solve(&gv, SOLVE_GUARD)?;
    let mut phi = Vec::with_capacity(4);
    for (j, a) in Axis::ALL.iter().enumerate() {
        phi.push(g[j].add(&ops.scal.apply(&apply_lift(*a, &phi_v))?));
    }
    let phi4 = g[3].add(&ops.scal.apply(&phi_v)?);
    let en = phi4.sub(&dot_normal(&phi)?);
    ScatterSolution::build(ops.ctx, phi, en, data_lmax)
}

/// Assembles and solves one formulation with operators sized for the data.
pub fn solve(formulation: Formulation, traces: &IncidentTraces, ctx: &WaveContext) -> Result<ScatterSolution> {
    let ops = SolverOperators::new(*ctx, traces.lmax() + 6)?;
    solve_with(&ops, formulation, traces)
}

/// As [`solve`], reusing operators tabulated to at least `traces.lmax() + 5`.
pub fn solve_with(ops: &SolverOperators, formulation: Formulation, traces: &IncidentTraces) -> Result<ScatterSolution> {
    if ops.lmax() < traces.lmax() + 5 {
        return Err(Error::Truncation(format!(
            "operators tabulated to degree {} but data of degree {} needs {}",
            ops.lmax(),
            traces.lmax(),
            traces.lmax() + 5
        )));
    }
    match formulation {
        Formulation::One => solve_f1_with(ops, &assemble_rhs_f1_with(ops, traces)?, traces),
        Formulation::Two => solve_f2_with(ops, &assemble_rhs_f2_with(ops, traces)?, traces.lmax()),
    }
}
