use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use sun_einstein::curvature::levi_civita;
use sun_einstein::solver::{scheme1_lhs, scheme2_lhs};
use sun_einstein::{Ansatz, CurvatureBundle, Tolerances};

const PROP: f64 = 1e-10;

fn seeded(cases: u32, seed: u64) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() }
}

/// Per-class constants in roughly `[0.2, 5]`.
fn constants(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.6f64..1.6, k).prop_map(|v| v.into_iter().map(f64::exp).collect())
}

fn scheme1_case() -> impl Strategy<Value = (Ansatz, Vec<f64>)> {
    (2usize..=5, constants(3)).prop_map(|(n, x)| (Ansatz::scheme1(n).unwrap(), x))
}

fn scheme2_case() -> impl Strategy<Value = (Ansatz, Vec<f64>)> {
    (2usize..=5)
        .prop_flat_map(|n| (Just(n), 1..n, constants(4)))
        .prop_map(|(n, p, x)| (Ansatz::scheme2(n, p).unwrap(), x))
}

fn check_connection(ans: &Ansatz, x: &[f64]) -> Result<(), TestCaseError> {
    let g = ans.frame_metric(x).unwrap();
    let conn = levi_civita(&ans.frame, &g);
    let d = g.len();
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                // g(nabla_a e_b, e_c) + g(e_b, nabla_a e_c) = 0
                let compat = g[c] * conn.get(c, a, b) + g[b] * conn.get(b, a, c);
                prop_assert!(compat.abs() < PROP, "compat ({a},{b},{c}) {compat}");
                // nabla_a e_b - nabla_b e_a = [e_a, e_b]
                let torsion = conn.get(c, a, b) - conn.get(c, b, a) - ans.frame.get(c, a, b);
                prop_assert!(torsion.abs() < PROP, "torsion ({a},{b},{c}) {torsion}");
            }
        }
    }
    Ok(())
}

fn check_riemann(ans: &Ansatz, x: &[f64]) -> Result<(), TestCaseError> {
    let bundle = ans.bundle(x).unwrap();
    let d = bundle.d;
    let scale = bundle.riemann.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = PROP * scale;
    let r = |p, q, a, b| bundle.lowered(p, q, a, b);
    for p in 0..d {
        for q in 0..d {
            for a in 0..d {
                for b in 0..d {
                    let v = r(p, q, a, b);
                    prop_assert!((v + r(p, q, b, a)).abs() < tol);
                    prop_assert!((v + r(q, p, a, b)).abs() < tol);
                    prop_assert!((v - r(a, b, p, q)).abs() < tol);
                    let bianchi = bundle.riemann_at(p, q, a, b)
                        + bundle.riemann_at(p, a, b, q)
                        + bundle.riemann_at(p, b, q, a);
                    prop_assert!(bianchi.abs() < tol, "bianchi {bianchi}");
                }
            }
        }
    }
    Ok(())
}

fn check_ricci(ans: &Ansatz, x: &[f64]) -> Result<(), TestCaseError> {
    let s = ans.summary(x).unwrap();
    for a in 0..s.d {
        for b in 0..s.d {
            prop_assert!((s.ricci_at(a, b) - s.ricci_at(b, a)).abs() < PROP);
        }
    }
    prop_assert!(ans.block_scalar_defect(&s) < PROP);
    Ok(())
}

proptest! {
    #![proptest_config(seeded(25, 11))]

    #[test]
    fn scheme1_connection((ans, x) in scheme1_case()) { check_connection(&ans, &x)?; }

    #[test]
    fn scheme2_connection((ans, x) in scheme2_case()) { check_connection(&ans, &x)?; }

    #[test]
    fn scheme1_riemann_symmetries((ans, x) in scheme1_case()) { check_riemann(&ans, &x)?; }

    #[test]
    fn scheme2_riemann_symmetries((ans, x) in scheme2_case()) { check_riemann(&ans, &x)?; }

    #[test]
    fn scheme1_ricci_block_scalar((ans, x) in scheme1_case()) { check_ricci(&ans, &x)?; }

    #[test]
    fn scheme2_ricci_block_scalar((ans, x) in scheme2_case()) { check_ricci(&ans, &x)?; }

    #[test]
    fn scaling_laws((ans, x) in scheme2_case(), s in 0.1f64..10.0) {
        let base = ans.summary(&x).unwrap();
        let xs: Vec<f64> = x.iter().map(|v| v * s).collect();
        let scaled = ans.summary(&xs).unwrap();
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);
        // Ricci is scale invariant, |Riem|^2 and lambda scale like 1/s^2 and 1/s.
        for a in 0..base.d {
            prop_assert!((base.ricci_at(a, a) - scaled.ricci_at(a, a)).abs() < PROP);
        }
        prop_assert!(rel(scaled.riem_norm_sq * s * s, base.riem_norm_sq) < PROP);
        prop_assert!(rel(scaled.lambda_best * s, base.lambda_best) < PROP);
    }

    #[test]
    fn engine_matches_printed_scheme1(n in 3usize..=5, x in constants(3)) {
        let ans = Ansatz::scheme1(n).unwrap();
        let means = ans.class_ricci(&ans.summary(&x).unwrap());
        let printed = scheme1_lhs(n, [x[0], x[1], x[2]]);
        for k in 0..3 {
            prop_assert!((means[k].unwrap() - printed[k]).abs() < 1e-9, "class {k}");
        }
    }

    #[test]
    fn engine_matches_printed_scheme2((ans, x) in scheme2_case()) {
        let (n, p) = (ans.n(), ans.p().unwrap());
        let means = ans.class_ricci(&ans.summary(&x).unwrap());
        let printed = scheme2_lhs(n, p, [x[0], x[1], x[2], x[3]]).unwrap();
        for k in 0..4 {
            if let Some(m) = means[k] {
                prop_assert!((m - printed[k]).abs() < 1e-9, "class {k}: {m} vs {}", printed[k]);
            }
        }
    }
}

#[test]
fn bi_invariant_calibration() {
    for n in 2..=8 {
        let ans = Ansatz::scheme1(n).unwrap();
        let s = ans.summary(&[1.0, 1.0, 1.0]).unwrap();
        let nf = n as f64;
        assert!(s.residual < 1e-8, "n={n}");
        assert!((s.lambda_best - nf / 8.0).abs() < 1e-10 * nf / 8.0, "n={n}");
        let i1 = s.invariant_i1(Tolerances::default().einstein).unwrap();
        assert!((i1 - (nf * nf - 1.0)).abs() < 1e-8 * (nf * nf - 1.0), "n={n} I1={i1}");
    }
}

#[test]
fn invariant_is_scale_free_at_einstein_points() {
    let ans = Ansatz::scheme1(4).unwrap();
    let tol = Tolerances::default().einstein;
    let base = ans.summary(&[7.0, 1.0, 7.0]).unwrap().invariant_i1(tol).unwrap();
    for s in [0.01, 0.5, 3.0, 250.0] {
        let i1 = ans.summary(&[7.0 * s, s, 7.0 * s]).unwrap().invariant_i1(tol).unwrap();
        assert!((i1 - base).abs() < 1e-10 * base);
    }
    // 276/13
    assert!((base - 276.0 / 13.0).abs() < 1e-10);
}

#[test]
fn norm_quarter_under_doubling() {
    let ans = Ansatz::scheme2(5, 2).unwrap();
    let x = [0.7, 1.3, 1.0, 0.05];
    let g = ans.frame_metric(&x).unwrap();
    let g2: Vec<f64> = g.iter().map(|v| 2.0 * v).collect();
    let a = CurvatureBundle::compute(&ans.frame, &g).riem_norm_sq;
    let b = CurvatureBundle::compute(&ans.frame, &g2).riem_norm_sq;
    assert!((4.0 * b - a).abs() < 1e-12 * a);
}
