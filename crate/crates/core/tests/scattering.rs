//! End-to-end scattering checks against exact multipole fields.

use fobie_core::harmonics::synthesize;
use fobie_core::lift::dot_normal;
use fobie_core::oracle::{
    evaluate_multipole, mie_scattered, multipole_field_traces, multipole_traces, regular_multipole_traces,
    MultipoleSpec, MultipoleTerm, Radial,
};
use fobie_core::solver::{evaluate_scattered, solve, Formulation};
use fobie_core::{Complex64, WaveContext};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn three_terms() -> MultipoleSpec {
    MultipoleSpec::new(vec![
        MultipoleTerm { l: 1, m: 1, a: c(0.8, -0.2), b: c(0.1, 0.4) },
        MultipoleTerm { l: 3, m: -2, a: c(-0.5, 0.3), b: c(0.0, 0.0) },
        MultipoleTerm { l: 4, m: 0, a: c(0.2, 0.2), b: c(-0.6, 0.35) },
    ])
    .unwrap()
}

fn sample_points(r: f64) -> Vec<[f64; 3]> {
    (0..10)
        .map(|i| {
            let th = 0.2 + 2.7 * (i as f64 + 0.5) / 10.0;
            let ph = -3.0 + 0.61 * i as f64;
            [r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos()]
        })
        .collect()
}

#[test]
fn manufactured_multipole_is_recovered_by_both_formulations() {
    for k in [0.5, 1.0, 3.0] {
        let ctx = WaveContext::with_default_eta(k).unwrap();
        let spec = three_terms();
        let (exact, traces) = multipole_traces(&spec, &ctx, 5).unwrap();
        for f in [Formulation::One, Formulation::Two] {
            let sol = solve(f, &traces, &ctx).unwrap();
            let err = sol.distance(&exact) / exact.norm();
            assert!(err <= 1e-8, "k={k} {f:?}: {err:e}");
            assert!(sol.tail_mass < 1e-12);

            for p in sample_points(2.0) {
                let got = evaluate_scattered(&sol, &traces, p, &ctx).unwrap();
                let want = evaluate_multipole(&spec, Radial::Hankel, k, p).unwrap();
                let scale = want.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
                let diff = (0..3).map(|j| (got[j] - want[j]).norm_sqr()).sum::<f64>().sqrt();
                assert!(diff <= 1e-8 * scale, "k={k} {f:?} {p:?}: {diff:e}");
            }
        }
    }
}

#[test]
fn radial_derivative_of_e_dot_x_matches_lift_assembly() {
    let k = 1.4;
    let spec = three_terms();
    let tr = multipole_field_traces(&spec, Radial::Hankel, k, 5).unwrap();
    // dr (E . x) at r = 1 is E . xhat + dr (E . xhat).
    let direct = tr.normal.add(&tr.normal_radial);
    let assembled = dot_normal(tr.radial.components()).unwrap().add(&tr.normal);
    assert!(direct.sub(&assembled).max_abs() < 1e-10 * direct.max_abs());
    // E . x = (i/k) sum b l(l+1) h_l(kr) Y.
    for t in spec.terms() {
        let h = fobie_core::specfun::sph_hankel_h1(t.l, k).unwrap();
        let want = Complex64::i() / k * t.b * (t.l * (t.l + 1)) as f64 * h;
        let idx = fobie_core::harmonics::HarmonicIndex::new(t.l, t.m).unwrap();
        assert!((tr.normal.get(idx) - want).norm() < 1e-12 * want.norm().max(1.0));
    }
}

#[test]
fn mie_scattering_by_a_regular_multipole() {
    for k in [0.7, 2.0] {
        let ctx = WaveContext::with_default_eta(k).unwrap();
        let incident = three_terms();
        let scattered = mie_scattered(&incident, k).unwrap();
        let traces = regular_multipole_traces(&incident, &ctx, 5).unwrap();
        let exact = multipole_field_traces(&scattered, Radial::Hankel, k, 5).unwrap();
        for f in [Formulation::One, Formulation::Two] {
            let sol = solve(f, &traces, &ctx).unwrap();
            let dn_err: f64 = (0..3)
                .map(|j| sol.dn_es.component(j).sub(exact.radial.component(j)).norm_sq())
                .sum::<f64>()
                .sqrt();
            let en_err = sol.en.sub(&exact.normal).norm();
            let scale = exact.radial.norm() + exact.normal.norm();
            assert!(dn_err + en_err <= 1e-9 * scale, "k={k} {f:?}: {dn_err:e} {en_err:e}");

            // The total tangential field vanishes on the sphere pointwise.
            let dir = sol.dirichlet(&traces).unwrap();
            for p in sample_points(1.0) {
                let th = p[2].acos();
                let ph = p[1].atan2(p[0]);
                let e: Vec<Complex64> = (0..3)
                    .map(|j| synthesize(dir.component(j), th, ph) + synthesize(traces.e_trace.component(j), th, ph))
                    .collect();
                let en: Complex64 = (0..3).map(|j| e[j] * p[j]).sum();
                for j in 0..3 {
                    assert!((e[j] - en * p[j]).norm() < 1e-10, "tangential total field at {p:?}");
                }
            }

            for p in sample_points(1.8) {
                let got = evaluate_scattered(&sol, &traces, p, &ctx).unwrap();
                let want = evaluate_multipole(&scattered, Radial::Hankel, k, p).unwrap();
                for j in 0..3 {
                    assert!((got[j] - want[j]).norm() < 1e-9);
                }
            }
        }
    }
}
