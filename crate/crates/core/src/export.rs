//! Tables and documents written by the command-line tool.
//!
//! CSV output is fixed-format (`.` decimal, `,` separator, a header row,
//! 15 significant digits in scientific notation) so that identical inputs
//! give byte-identical files.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::harmonics::HarmonicIndex;
use crate::solver::{Formulation, Formulation1Spectrum, Formulation2Spectrum, ScatterSolution};
use crate::spectra::{SpectralTable, WaveContext};

/// Formats a float with 15 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.14e}")
}

fn push_complex(row: &mut Vec<String>, z: Complex64) {
    row.push(fmt_f64(z.re));
    row.push(fmt_f64(z.im));
}

fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

/// Every per-degree quantity of the spectral model at one wavenumber.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub ell: usize,
    pub s: Complex64,
    pub lambda1: Complex64,
    pub lambda2: Complex64,
    /// `l |lambda2 - 1|`.
    pub clustering: f64,
    pub single_layer: Complex64,
    pub double_layer: Complex64,
    pub hypersingular: Complex64,
    pub combined_d: Complex64,
    pub combined_n: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub k: f64,
    pub eta: f64,
    pub lmax: usize,
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumTable {
    pub fn new(ctx: &WaveContext, lmax: usize) -> Self {
        let table = SpectralTable::new(*ctx, lmax + 2);
        let f1 = Formulation1Spectrum::from_table(&table, lmax);
        let f2 = Formulation2Spectrum::from_table(&table, lmax);
        let rows = (0..=lmax)
            .map(|l| SpectrumRow {
                ell: l,
                s: table.s_hankel(l as isize),
                lambda1: f1.lambda1(l),
                lambda2: f2.lambda2(l),
                clustering: l as f64 * (f2.lambda2(l) - 1.0).norm(),
                single_layer: table.single_layer(l),
                double_layer: table.double_layer(l),
                hypersingular: table.hypersingular(l),
                combined_d: table.combined_d(l),
                combined_n: table.combined_n(l),
            })
            .collect();
        SpectrumTable { k: ctx.k(), eta: ctx.eta(), lmax, rows }
    }

    pub const CSV_HEADER: [&'static str; 23] = [
        "ell", "k", "eta", "re_s", "im_s", "re_lambda1", "im_lambda1", "abs_lambda1", "re_lambda2", "im_lambda2",
        "abs_lambda2", "ell_abs_lambda2_minus_1", "re_single", "im_single", "re_double", "im_double", "re_hyper",
        "im_hyper", "re_d", "im_d", "re_ncal", "im_ncal", "abs_lambda2_minus_1",
    ];

    pub fn to_csv(&self) -> String {
        let rows = self.rows.iter().map(|r| {
            let mut v = vec![r.ell.to_string(), fmt_f64(self.k), fmt_f64(self.eta)];
            push_complex(&mut v, r.s);
            push_complex(&mut v, r.lambda1);
            v.push(fmt_f64(r.lambda1.norm()));
            push_complex(&mut v, r.lambda2);
            v.push(fmt_f64(r.lambda2.norm()));
            v.push(fmt_f64(r.clustering));
            for z in [r.single_layer, r.double_layer, r.hypersingular, r.combined_d, r.combined_n] {
                push_complex(&mut v, z);
            }
            v.push(fmt_f64((r.lambda2 - 1.0).norm()));
            v
        });
        csv(&Self::CSV_HEADER, rows)
    }
}

/// Per-wavenumber extremes of the two spectra.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub k: f64,
    pub eta: f64,
    pub min_abs_lambda1: f64,
    pub argmin_lambda1: usize,
    pub min_abs_lambda2: f64,
    pub argmin_lambda2: usize,
    /// `max l |lambda2 - 1|` over `clustering_from <= l <= lmax`.
    pub clustering_constant: f64,
    pub clustering_argmax: usize,
    pub clustering_from: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub lmax: usize,
    pub rows: Vec<SweepRow>,
}

/// Degree from which sweeps measure clustering.
pub const CLUSTERING_FROM: usize = 50;

impl SweepTable {
    /// Rows come back in the order of `contexts`, whatever order the
    /// parallel tasks finish in.
    pub fn new(contexts: &[WaveContext], lmax: usize) -> Self {
        let from = CLUSTERING_FROM.min(lmax);
        let rows = contexts
            .par_iter()
            .map(|ctx| {
                let table = SpectralTable::new(*ctx, lmax + 2);
                let f1 = Formulation1Spectrum::from_table(&table, lmax);
                let f2 = Formulation2Spectrum::from_table(&table, lmax);
                let (a1, m1) = f1.min_modulus();
                let (a2, m2) = f2.min_modulus();
                let (ac, c) = f2.clustering(from);
                SweepRow {
                    k: ctx.k(),
                    eta: ctx.eta(),
                    min_abs_lambda1: m1,
                    argmin_lambda1: a1,
                    min_abs_lambda2: m2,
                    argmin_lambda2: a2,
                    clustering_constant: c,
                    clustering_argmax: ac,
                    clustering_from: from,
                }
            })
            .collect();
        SweepTable { lmax, rows }
    }

    pub const CSV_HEADER: [&'static str; 9] = [
        "k",
        "eta",
        "min_abs_lambda1",
        "argmin_lambda1",
        "min_abs_lambda2",
        "argmin_lambda2",
        "clustering_constant",
        "clustering_argmax",
        "clustering_from",
    ];

    pub fn to_csv(&self) -> String {
        let rows = self.rows.iter().map(|r| {
            vec![
                fmt_f64(r.k),
                fmt_f64(r.eta),
                fmt_f64(r.min_abs_lambda1),
                r.argmin_lambda1.to_string(),
                fmt_f64(r.min_abs_lambda2),
                r.argmin_lambda2.to_string(),
                fmt_f64(r.clustering_constant),
                r.clustering_argmax.to_string(),
                r.clustering_from.to_string(),
            ]
        });
        csv(&Self::CSV_HEADER, rows)
    }
}

/// One formulation's solution inside a [`SolveReport`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormulationResult {
    pub formulation: Formulation,
    pub solution: ScatterSolution,
    /// Relative distance to a known exact solution, when one exists.
    pub reference_error: Option<f64>,
}

/// Output of a scattering solve.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveReport {
    pub k: f64,
    pub eta: f64,
    pub incident: String,
    pub data_lmax: usize,
    pub results: Vec<FormulationResult>,
    /// Relative distance between the two formulations, when both ran.
    pub cross_formulation_difference: Option<f64>,
    pub max_tail_mass: f64,
}

impl SolveReport {
    pub const CSV_HEADER: [&'static str; 6] = ["formulation", "quantity", "ell", "m", "re", "im"];

    /// Coefficient listing: `dn_es_1..3` and `en` for each formulation.
    pub fn to_csv(&self) -> String {
        let mut rows = Vec::new();
        for r in &self.results {
            let mut fields: Vec<(String, &crate::harmonics::CoeffField)> = r
                .solution
                .dn_es
                .components()
                .iter()
                .enumerate()
                .map(|(j, c)| (format!("dn_es_{}", j + 1), c))
                .collect();
            fields.push(("en".into(), &r.solution.en));
            for (name, c) in fields {
                for (idx, z) in c.iter() {
                    let HarmonicIndex { ell, m } = idx;
                    let mut v = vec![r.formulation.to_string(), name.clone(), ell.to_string(), m.to_string()];
                    push_complex(&mut v, z);
                    rows.push(v);
                }
            }
        }
        csv(&Self::CSV_HEADER, rows)
    }
}

/// Pretty JSON for any exported document.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_fixed() {
        assert_eq!(fmt_f64(0.25), "2.50000000000000e-1");
        assert_eq!(fmt_f64(-1234.5), "-1.23450000000000e3");
    }

    #[test]
    fn spectrum_row_zero_has_closed_form_lambda1() {
        let t = SpectrumTable::new(&WaveContext::new(1.0, 1.0).unwrap(), 10);
        assert!((t.rows[0].lambda1 - Complex64::new(0.25, 0.25)).norm() < 1e-13);
        let csv = t.to_csv();
        assert_eq!(csv.lines().count(), 12);
        assert!(csv.lines().all(|l| l.split(',').count() == SpectrumTable::CSV_HEADER.len()));
        assert!(csv.lines().nth(1).unwrap().starts_with("0,1.00000000000000e0,1.00000000000000e0,"));
    }

    #[test]
    fn sweep_rows_follow_input_order_and_match_the_spectrum() {
        let ctxs: Vec<WaveContext> = [3.0, 0.2, 1.0].iter().map(|&k| WaveContext::with_default_eta(k).unwrap()).collect();
        let sweep = SweepTable::new(&ctxs, 60);
        assert_eq!(sweep.rows.iter().map(|r| r.k).collect::<Vec<_>>(), vec![3.0, 0.2, 1.0]);
        let spec = SpectrumTable::new(&ctxs[2], 60);
        let min1 = spec.rows.iter().map(|r| r.lambda1.norm()).fold(f64::INFINITY, f64::min);
        let c = spec.rows[50..].iter().map(|r| r.clustering).fold(0.0, f64::max);
        assert_eq!(sweep.rows[2].min_abs_lambda1, min1);
        assert!((sweep.rows[2].clustering_constant - c).abs() <= 1e-15 * c);
        assert_eq!(sweep.to_csv(), SweepTable::new(&ctxs, 60).to_csv());
    }

    #[test]
    fn json_round_trip() {
        let t = SpectrumTable::new(&WaveContext::new(2.0, 2.0).unwrap(), 3);
        let back: SpectrumTable = serde_json::from_str(&to_json(&t).unwrap()).unwrap();
        assert_eq!(back, t);
    }
}
