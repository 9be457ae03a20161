mod common;

use common::{scheme_distortion, scheme_joint, A, B, E, U, V};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use secwz::binary::{
    build_source, closed_form, curve_csv, curve_grid, fig4_scheme, optimize_beta, oracle_check, sweep_fig5, table1,
    wyner_ziv_threshold, BecBscParams, BinaryScheme,
};
use secwz::region::evaluate_scheme;

fn h2(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
    }
}

fn star(a: f64, b: f64) -> f64 {
    a * (1.0 - b) + b * (1.0 - a)
}

/// Hand-derived closed form for the two-parameter family.
fn prop_delta(p: f64, eps: f64, alpha: f64, beta: f64) -> f64 {
    let ab = star(alpha, beta);
    (eps * h2(alpha) + (1.0 - eps) * h2(ab) - h2(star(p, ab)) + h2(p)).max(0.0)
}

/// Dense scan over beta, oracle for the per-alpha optimum.
fn best_beta(p: f64, eps: f64, alpha: f64) -> (f64, f64) {
    (0..=20_000)
        .map(|i| 0.5 * i as f64 / 20_000.0)
        .map(|b| (b, prop_delta(p, eps, alpha, b)))
        .fold((0.0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc })
}

fn paper() -> BecBscParams {
    BecBscParams::new(0.1, 0.469).unwrap()
}

#[test]
fn closed_form_equals_general_evaluation_on_random_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..100 {
        let params = BecBscParams::new(rng.gen_range(0.0..=0.5), rng.gen_range(0.0..=1.0)).unwrap();
        let scheme = BinaryScheme::new(rng.gen_range(0.0..=0.5), rng.gen_range(0.0..=0.5)).unwrap();
        let closed = closed_form(&params, &scheme);
        let src = build_source(&params);
        let general = evaluate_scheme(&src, &fig4_scheme(&scheme)).unwrap();
        assert!(closed.max_abs_diff(&general) < 1e-9, "{params:?} {scheme:?}");
        assert!(oracle_check(&params, &scheme).unwrap() < 1e-9);

        // and against the brute-force joint
        let aux = fig4_scheme(&scheme);
        let d = scheme_joint(&src, &aux);
        assert!((closed.rate - d.mi(&[V], &[A], &[B])).abs() < 1e-9);
        assert!((closed.distortion - scheme_distortion(&src, &aux, &d)).abs() < 1e-9);
        let delta = d.ch(&[A], &[V, B]) + d.mi(&[A], &[B], &[U]) - d.mi(&[A], &[E], &[U]);
        assert!((closed.equivocation - delta.clamp(0.0, 1.0)).abs() < 1e-9);
        assert!((closed.equivocation - prop_delta(params.p, params.eps, scheme.alpha, scheme.beta)).abs() < 1e-9);
        assert!((closed.rate - params.eps * (1.0 - h2(scheme.alpha))).abs() < 1e-12);
        assert!((closed.distortion - params.eps * scheme.alpha).abs() < 1e-12);
    }
}

#[test]
fn table_columns_match_published_values() {
    let t = table1(&paper(), 0.8).unwrap();
    let want = [
        ((0.469, 0.0, 0.039), (0.0, 0.078)),
        ((0.469, 0.0, 0.0), (0.0, 0.0)),
        ((0.375, 0.015, 0.133), (0.031, 0.050)),
        ((0.375, 0.015, 0.126), (0.031, 0.0)),
    ];
    for (c, ((r, d, delta), (alpha, beta))) in t.columns.iter().zip(want) {
        assert!((c.tuple.rate - r).abs() <= 1e-3, "{c:?}");
        assert!((c.tuple.distortion - d).abs() <= 1e-3, "{c:?}");
        assert!((c.tuple.equivocation - delta).abs() <= 1e-3, "{c:?}");
        assert!((c.alpha - alpha).abs() <= 2e-3, "{c:?}");
        assert!((c.beta - beta).abs() <= 2e-3, "{c:?}");
    }
    let text = t.to_text();
    assert!(text.contains("0.039") && text.contains("0.133") && text.contains("0.126"));
    assert_eq!(t.to_csv().lines().next().unwrap(), "column,R,D,Delta,alpha,beta");
}

#[test]
fn beta_optimizer_matches_dense_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..30 {
        let (p, eps, alpha) = (rng.gen_range(0.0..=0.5), rng.gen_range(0.0..=1.0), rng.gen_range(0.0..=0.5));
        let params = BecBscParams::new(p, eps).unwrap();
        let (_, got) = optimize_beta(&params, alpha);
        let (_, want) = best_beta(p, eps, alpha);
        assert!(got >= want - 1e-9, "p={p} eps={eps} alpha={alpha}: {got} < {want}");
        assert!(got <= want + 1e-6);
    }
}

#[test]
fn curve_structure() {
    let params = paper();
    let curve = sweep_fig5(&params, &curve_grid(&params, 200)).unwrap();
    assert_eq!(curve.len(), 200);
    for w in curve.windows(2) {
        assert!(w[1].delta_general >= w[0].delta_general - 1e-9);
        assert!(w[1].delta_wz >= w[0].delta_wz - 1e-9);
    }
    for c in &curve {
        assert!(c.delta_general >= c.delta_wz - 1e-12);
    }
    let threshold = wyner_ziv_threshold(&curve).unwrap();
    assert!((threshold - 0.036).abs() <= 2e-3, "{threshold}");
    // past the threshold beta stays at zero
    assert!(curve.iter().filter(|c| c.d >= threshold).all(|c| c.beta_opt == 0.0));
    assert_eq!(curve_csv(&curve).lines().next().unwrap(), "D,delta_general,delta_wz,alpha,beta_opt");
}

#[test]
fn threshold_from_independent_scan() {
    // first grid distortion where the dense-scan optimum is beta = 0
    let (p, eps) = (0.1, 0.469);
    let d = (0..=2000)
        .map(|i| 0.1 * i as f64 / 2000.0)
        .find(|&d| best_beta(p, eps, d / eps).0 == 0.0)
        .unwrap();
    assert!((d - 0.036).abs() <= 2e-3, "{d}");
}

#[test]
fn out_of_range_parameters() {
    assert!(BecBscParams::new(0.6, 0.2).is_err());
    assert!(BecBscParams::new(0.1, -0.2).is_err());
    assert!(BinaryScheme::new(0.7, 0.0).is_err());
    assert!(table1(&paper(), 1.2).is_err());
    assert!(sweep_fig5(&paper(), &[-0.1]).is_err());
}
