//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints its pass/fail line in the `cargo test` output; the
//! process fails if any criterion fails.

use std::time::Instant;

use fobie_core::lift::lift_coeffs;
use fobie_core::oracle::{evaluate_multipole, multipole_traces, Radial, DEFAULT_NODES};
use fobie_core::solver::{evaluate_scattered, solve, Formulation};
use fobie_core::verify::{
    calderon_residual, clustering_profile, cross_formulation_residual, dense_vs_diagonal_residual,
    lambda1_asymptotic_ratio, layer_quadrature_residual, lemma_gate_residual, log_grid, manufactured_residual,
    recursion_residual, recursion_residual_at_zero_with_convention, reference_multipole, sn_diagonal_residuals,
    spectrum_scan, three_form_residual,
};
use fobie_core::{Result, WaveContext};

struct Outcome {
    passed: bool,
    summary: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, summary: String) -> Self {
        Outcome { passed, summary, notes: Vec::new() }
    }

    fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }
}

fn ctx(k: f64) -> WaveContext {
    WaveContext::with_default_eta(k).unwrap()
}

fn criterion_1() -> Result<Outcome> {
    let r = lemma_gate_residual(25, lift_coeffs)?;
    Ok(Outcome::new(r <= 1e-11, format!("lift coefficients vs quadrature, l <= 25, 3 axes: max error {r:.2e} (tol 1e-11)")))
}

fn criterion_2() -> Result<Outcome> {
    let mut off_max: f64 = 0.0;
    let mut diag_max: f64 = 0.0;
    for k in [0.5, 1.0, 5.0] {
        let (off, diag) = sn_diagonal_residuals(&ctx(k), 12)?;
        off_max = off_max.max(off);
        diag_max = diag_max.max(diag);
    }
    Ok(Outcome::new(
        off_max <= 1e-12 && diag_max <= 1e-10,
        format!(
            "dense S_n at lmax 12, k in {{0.5, 1, 5}}: off-diagonal {off_max:.2e} (tol 1e-12), diagonal error {diag_max:.2e} (tol 1e-10)"
        ),
    ))
}

fn criterion_3() -> Result<Outcome> {
    let ks = log_grid(1e-2, 1e2, 60)?;
    let s = spectrum_scan(&ks, 400)?;
    let passed = s.min_lambda1 > 0.0 && s.min_lambda2 > 0.0 && s.im_violations == 0 && s.min_re_margin > 0.0;
    Ok(Outcome::new(
        passed,
        format!(
            "60 log-spaced k in [1e-2, 1e2], l <= 400: min|lambda1| = {:.3e}, min|lambda2| = {:.3e}, min(-Re s_l - 1) over l >= 1 = {:.3e}, Im s_l <= 0 at {} points (smallest Im s_l = 10^{:.0})",
            s.min_lambda1, s.min_lambda2, s.min_re_margin, s.im_violations, s.min_log10_im
        ),
    )
    .note(format!(
        "degree 0 is an equality, not a strict inequality: -Re s_0 = 1 exactly (max |-Re s_0 - 1| = {:.1e} is round-off), so -Re s_l > 1 holds on the grid only for l >= 1",
        s.l0_re_deviation
    )))
}

fn criterion_4() -> Result<Outcome> {
    let c = ctx(1.0);
    let ratio = lambda1_asymptotic_ratio(&c, 200);
    let dev = (ratio - 1.0).norm();
    let prof = clustering_profile(&c, 50, 400);
    let monotone_tail = prof.monotone_from <= 100;
    Ok(Outcome::new(
        dev <= 0.05 && prof.constant.is_finite() && monotone_tail,
        format!(
            "k = 1: |lambda1(200)/asymptote - 1| = {dev:.3e} (tol 0.05); max over 50 <= l <= 400 of l|lambda2 - 1| = {:.6} at l = {}, {} from l = {} toward {:.6}",
            prof.constant,
            prof.argmax,
            if prof.increasing_tail { "monotonically increasing" } else { "monotonically decreasing" },
            prof.monotone_from,
            prof.tail_limit
        ),
    ))
}

fn criterion_5() -> Result<Outcome> {
    let x = [0.48, -0.6, 0.64];
    let mut quad: f64 = 0.0;
    for k in [0.5, 1.0, 2.5, 5.0] {
        quad = quad.max(layer_quadrature_residual(&ctx(k), 10, DEFAULT_NODES, x, true)?);
    }
    let mut cal: f64 = 0.0;
    let mut rec: f64 = 0.0;
    let mut rec0: f64 = f64::INFINITY;
    for k in [0.5, 1.0, 5.0] {
        cal = cal.max(calderon_residual(&ctx(k), 200));
        rec = rec.max(recursion_residual(&ctx(k), 200));
        rec0 = rec0.min(recursion_residual_at_zero_with_convention(&ctx(k)));
    }
    Ok(Outcome::new(
        quad <= 1e-6 && cal <= 1e-10 && rec <= 1e-10,
        format!(
            "quadrature vs spectral S and K, every Y_l^m with l <= 10, k in {{0.5, 1, 2.5, 5}}, {}x{} nodes: {quad:.2e} (tol 1e-6); Calderon N S = K^2 - 1/4, l <= 200: {cal:.2e}; recursion, l <= 200: {rec:.2e} (tol 1e-10)",
            DEFAULT_NODES.0, DEFAULT_NODES.1
        ),
    )
    .note(format!(
        "the recursion at l = 0 involves s_(-1); with the convention s_(-1) = 0 it fails (relative residual >= {rec0:.2}), so degree 0 is checked through the shifted form (s_0)(s_1 + 2) = -k^2, which covers the same pair"
    )))
}

fn criterion_6() -> Result<Outcome> {
    let spec = reference_multipole();
    let mut coeff: f64 = 0.0;
    let mut field: f64 = 0.0;
    for k in [0.5, 1.0, 3.0] {
        let c = ctx(k);
        coeff = coeff.max(manufactured_residual(&c, &spec)?);
        let (_, traces) = multipole_traces(&spec, &c, spec.max_degree() + 1)?;
        for f in [Formulation::One, Formulation::Two] {
            let sol = solve(f, &traces, &c)?;
            for i in 0..10 {
                let th = 0.2 + 2.7 * (i as f64 + 0.5) / 10.0;
                let ph = -3.0 + 0.61 * i as f64;
                let p = [2.0 * th.sin() * ph.cos(), 2.0 * th.sin() * ph.sin(), 2.0 * th.cos()];
                let got = evaluate_scattered(&sol, &traces, p, &c)?;
                let want = evaluate_multipole(&spec, Radial::Hankel, k, p)?;
                let scale = want.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
                let diff = (0..3).map(|j| (got[j] - want[j]).norm_sqr()).sum::<f64>().sqrt();
                field = field.max(diff / scale);
            }
        }
    }
    Ok(Outcome::new(
        coeff <= 1e-8 && field <= 1e-8,
        format!(
            "3-term multipole (l <= 4), k in {{0.5, 1, 3}}, both formulations: coefficient error {coeff:.2e}, exterior field at 10 points on r = 2: {field:.2e} (tol 1e-8)"
        ),
    ))
}

fn criterion_7() -> Result<Outcome> {
    let c = ctx(1.0);
    let cross = cross_formulation_residual(&c, 40)?;
    let mut dense: f64 = 0.0;
    for k in [0.5, 1.0, 5.0] {
        dense = dense.max(dense_vs_diagonal_residual(&ctx(k), 10)?);
    }
    Ok(Outcome::new(
        cross <= 1e-8 && dense <= 1e-9,
        format!(
            "plane wave k = 1, lmax = 40: formulation 1 vs 2 {cross:.2e} (tol 1e-8); dense LU at lmax = 10 vs diagonal, k in {{0.5, 1, 5}}: {dense:.2e} (tol 1e-9)"
        ),
    ))
}

fn criterion_8() -> Result<Outcome> {
    let r = three_form_residual(&[0.1, 1.0, 5.0, 20.0], 150)?;
    Ok(Outcome::new(r <= 1e-9, format!("hankel, rational and difference forms, l <= 150, k in {{0.1, 1, 5, 20}}: {r:.2e} (tol 1e-9)")))
}

type Criterion = (usize, &'static str, f64, fn() -> Result<Outcome>);

fn main() {
    let criteria: [Criterion; 8] = [
        (1, "lift coefficient gate", 60.0, criterion_1),
        (2, "normal compression diagonal", 30.0, criterion_2),
        (3, "unique solvability", 60.0, criterion_3),
        (4, "asymptotics", 10.0, criterion_4),
        (5, "spectra cross-validation", 120.0, criterion_5),
        (6, "manufactured solve", 30.0, criterion_6),
        (7, "cross-formulation and dense agreement", 60.0, criterion_7),
        (8, "three-form s_l", 10.0, criterion_8),
    ];
    let mut failures = 0;
    println!();
    for (n, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let (passed, summary, notes) = match outcome {
            Ok(o) => (o.passed && secs <= budget, o.summary, o.notes),
            Err(e) => (false, format!("error: {e}"), Vec::new()),
        };
        if !passed {
            failures += 1;
        }
        let verdict = match (passed, notes.is_empty()) {
            (true, true) => "PASS",
            (true, false) => "PASS (deviation noted)",
            (false, _) => "FAIL",
        };
        println!("criterion {n} [{name}]: {verdict} in {secs:.2} s (budget {budget} s): {summary}");
        for note in notes {
            println!("    note: {note}");
        }
    }
    println!("\nacceptance: {} of 8 criteria passed\n", 8 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
