//! The four subcommands. Each returns the document to write and whether
//! its checks passed, plus a one-line summary for stderr.

use fobie_core::export::{to_json, FormulationResult, SolveReport, SpectrumTable, SweepTable};
use fobie_core::oracle::multipole_traces;
use fobie_core::solver::{plane_wave_traces, solve, Formulation, IncidentTraces, ScatterSolution};
use fobie_core::verify::{run_verify, VerifyOptions, VerifyReport};
use fobie_core::WaveContext;

use crate::config::{Command, Format, FormulationSel, IncidentKind, RunConfig};
use crate::error::CliError;

pub struct Outcome {
    pub document: String,
    pub passed: bool,
    pub summary: String,
}

/// Default truncation of `spectrum`.
pub const SPECTRUM_LMAX: usize = 50;
/// Default truncation of `sweep`, wide enough for the clustering window.
pub const SWEEP_LMAX: usize = 400;
/// Default plane-wave truncation of `solve`.
pub const PLANE_WAVE_LMAX: usize = 20;
/// Default pass/fail tolerance of `solve`.
pub const SOLVE_TOL: f64 = 1e-8;

pub fn run(command: Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match command {
        Command::Spectrum => spectrum(cfg),
        Command::Verify => verify(cfg),
        Command::Solve => solve_cmd(cfg),
        Command::Sweep => sweep(cfg),
    }
}

fn context(cfg: &RunConfig, k: f64) -> Result<WaveContext, CliError> {
    Ok(WaveContext::new(k, cfg.eta.unwrap_or_else(|| WaveContext::default_eta(k)))?)
}

fn spectrum(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ctx = context(cfg, cfg.require_k()?)?;
    let lmax = cfg.lmax.unwrap_or(SPECTRUM_LMAX);
    let table = SpectrumTable::new(&ctx, lmax);
    let document = match cfg.format {
        Format::Csv => table.to_csv(),
        Format::Json => to_json(&table)?,
    };
    let (l1, m1) = table.rows.iter().enumerate().map(|(l, r)| (l, r.lambda1.norm())).fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    Ok(Outcome {
        document,
        passed: true,
        summary: format!("spectrum k={} eta={} lmax={lmax}: min |lambda1| = {m1:.6e} at l = {l1}", ctx.k(), ctx.eta()),
    })
}

fn sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let grid = cfg.k_grid()?;
    let contexts = grid.iter().map(|&k| context(cfg, k)).collect::<Result<Vec<_>, _>>()?;
    let lmax = cfg.lmax.unwrap_or(SWEEP_LMAX);
    let table = SweepTable::new(&contexts, lmax);
    let min1 = table.rows.iter().map(|r| r.min_abs_lambda1).fold(f64::INFINITY, f64::min);
    let min2 = table.rows.iter().map(|r| r.min_abs_lambda2).fold(f64::INFINITY, f64::min);
    let cmax = table.rows.iter().map(|r| r.clustering_constant).fold(0.0, f64::max);
    let passed = min1 > 0.0 && min2 > 0.0 && cmax.is_finite();
    let document = match cfg.format {
        Format::Csv => table.to_csv(),
        Format::Json => to_json(&table)?,
    };
    Ok(Outcome {
        document,
        passed,
        summary: format!(
            "sweep over {} wavenumbers, lmax={lmax}: min |lambda1| = {min1:.6e}, min |lambda2| = {min2:.6e}, max l|lambda2-1| = {cmax:.6}",
            grid.len()
        ),
    })
}

fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

fn verify_csv(report: &VerifyReport) -> String {
    let mut out = String::from("name,passed,informational,measured,comparison,threshold,detail\n");
    for s in &report.suites {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            s.name,
            s.passed,
            s.informational,
            fobie_core::export::fmt_f64(s.measured),
            csv_quote(s.comparison.symbol()),
            fobie_core::export::fmt_f64(s.threshold),
            csv_quote(&s.detail)
        ));
    }
    out
}

fn verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let opts = VerifyOptions { k: cfg.k.unwrap_or(1.0), eta: cfg.eta, quick: cfg.quick, fault: cfg.lift_fault };
    let report = run_verify(&opts)?;
    let document = match cfg.format {
        Format::Csv => verify_csv(&report),
        Format::Json => to_json(&report)?,
    };
    let failed: Vec<&str> = report.failures().map(|s| s.name.as_str()).collect();
    let summary = if failed.is_empty() {
        format!("verify k={}: all {} invariants passed", report.k, report.suites.iter().filter(|s| !s.informational).count())
    } else {
        format!("verify k={}: FAILED {}", report.k, failed.join(", "))
    };
    Ok(Outcome { document, passed: report.passed, summary })
}

fn normalized(v: [f64; 3], name: &str) -> Result<[f64; 3], CliError> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if !(n > 0.0 && n.is_finite()) {
        return Err(CliError::Usage(format!("{name} must be a nonzero finite vector")));
    }
    Ok(v.map(|x| x / n))
}

fn fmt_vec(v: [f64; 3]) -> String {
    format!("({}, {}, {})", v[0], v[1], v[2])
}

fn solve_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let kind = cfg
        .incident
        .ok_or_else(|| CliError::Usage("missing incident spec: give --incident planewave or --incident multipole".into()))?;
    let ctx = context(cfg, cfg.require_k()?)?;
    let tol = cfg.tol.unwrap_or(SOLVE_TOL);
    let (traces, exact, description): (IncidentTraces, Option<ScatterSolution>, String) = match kind {
        IncidentKind::Planewave => {
            let d = normalized(cfg.dir.unwrap_or([0.0, 0.0, 1.0]), "dir")?;
            let p = normalized(cfg.pol.unwrap_or([1.0, 0.0, 0.0]), "pol")?;
            let lmax = cfg.lmax.unwrap_or(PLANE_WAVE_LMAX);
            let tr = plane_wave_traces(d, p, &ctx, lmax)?;
            (tr, None, format!("plane wave d = {}, p = {}, lmax = {lmax}", fmt_vec(d), fmt_vec(p)))
        }
        IncidentKind::Multipole => {
            let spec = cfg
                .multipole
                .as_ref()
                .ok_or_else(|| CliError::Usage("multipole incident needs --multipole-file or a config \"multipole\" entry".into()))?;
            let lmax = cfg.lmax.unwrap_or(spec.max_degree() + 1);
            let (exact, tr) = multipole_traces(spec, &ctx, lmax)?;
            (tr, Some(exact), format!("manufactured multipole with {} terms, lmax = {lmax}", spec.terms().len()))
        }
    };
    let formulations: Vec<Formulation> = match cfg.formulation {
        FormulationSel::One => vec![Formulation::One],
        FormulationSel::Two => vec![Formulation::Two],
        FormulationSel::Both => vec![Formulation::One, Formulation::Two],
    };
    let results = formulations
        .iter()
        .map(|&f| -> Result<FormulationResult, CliError> {
            let solution = solve(f, &traces, &ctx)?;
            let reference_error = exact.as_ref().map(|e| solution.distance(e) / e.norm());
            Ok(FormulationResult { formulation: f, solution, reference_error })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let cross = match results.as_slice() {
        [a, b] => Some(a.solution.distance(&b.solution) / a.solution.norm().max(f64::MIN_POSITIVE)),
        _ => None,
    };
    let max_tail_mass = results.iter().map(|r| r.solution.tail_mass).fold(0.0, f64::max);
    let report = SolveReport {
        k: ctx.k(),
        eta: ctx.eta(),
        incident: description,
        data_lmax: traces.lmax(),
        results,
        cross_formulation_difference: cross,
        max_tail_mass,
    };
    let mut passed = cross.is_none_or(|c| c <= tol);
    let mut parts = vec![format!("solve k={} eta={}", report.k, report.eta)];
    if let Some(c) = cross {
        parts.push(format!("cross-formulation difference {c:.3e}"));
    }
    for r in &report.results {
        if let Some(e) = r.reference_error {
            passed &= e <= tol;
            parts.push(format!("formulation {} error vs exact {e:.3e}", r.formulation));
        }
    }
    parts.push(format!("tail mass {max_tail_mass:.3e}"));
    parts.push(format!("tolerance {tol:e}: {}", if passed { "ok" } else { "EXCEEDED" }));
    let document = match cfg.format {
        Format::Csv => report.to_csv(),
        Format::Json => to_json(&report)?,
    };
    Ok(Outcome { document, passed, summary: parts.join("; ") })
}
