use proptest::prelude::*;

use graphsa::certify::{
    adversarial_real_witness, audit_imag_inequality, audit_real_inequality, certify_hypotheses, check_gradient_condition,
    corollary_decomposition, fit_growth_constants, interior, run_audits, BallQuery, CorollaryHypotheses, SelfAdjointHypotheses,
};
use graphsa::graph::FiniteGraph;
use graphsa::operator::{grad_squared_fn, Potential, VertexFunction};
use graphsa::report::{corollary_on_rows, triangular_jump_size};
use graphsa::zoo::{triangular_potential_fn, triangular_rho_closed_form, TriangularGraph};
use graphsa::{Error, PathMetric, Verdict, VertexId};

fn rows_hypotheses(metric: &PathMetric<'_, TriangularGraph>, rows: u32, b1: f64, b2: f64) -> CorollaryHypotheses {
    CorollaryHypotheses {
        o: TriangularGraph::origin(),
        b1,
        b2,
        jump: triangular_jump_size(metric, rows).unwrap(),
        scope: TriangularGraph::rows_range(1, rows),
        scope_name: format!("rows 1..={rows}"),
        budget: usize::MAX,
    }
}

#[test]
fn cubic_well_defeats_the_growth_condition() {
    let g = TriangularGraph::infinite();
    let m = PathMetric::degree_path(&g);
    let v = VertexFunction::from_fn("V = -k^3", |x| x.row().map(|k| -(k as f64).powi(3)));
    let d = corollary_decomposition(&m, &v, &rows_hypotheses(&m, 30, 1.0, 4.0)).unwrap();
    assert_eq!(d.certificate.verdict, Verdict::Fail);
    let growth = d.certificate.part("V >= -1 - 4 rho^2").unwrap();
    assert_eq!(growth.verdict, Verdict::Fail);
    // row 1: V = -1 = -b1 holds; row 2 already fails
    assert!(growth.witnesses.iter().any(|w| w.vertices == vec!["2,1".to_string()]));
    assert_eq!(d.certificate.part("U >= 0").unwrap().verdict, Verdict::Fail);
}

#[test]
fn quartic_weight_defeats_the_gradient_condition() {
    let g = TriangularGraph::infinite();
    let m = PathMetric::degree_path(&g);
    let table = TriangularGraph::rows_range(1, 31).into_iter().map(|x| {
        let r = triangular_rho_closed_form(x.row().unwrap());
        (x, r.powi(4))
    });
    let w = VertexFunction::from_table("W = rho^4", table, None);
    let u = triangular_potential_fn().plus(&w);
    let scope = TriangularGraph::rows_range(1, 30);
    let h = SelfAdjointHypotheses {
        metric: &m,
        scope: scope.clone(),
        scope_name: "rows 1..=30".into(),
        potential: Potential::new(triangular_potential_fn()).with_split(u, w.clone()),
        c1: 0.0,
        c2: 36.0,
        balls: vec![],
    };
    let c = certify_hypotheses(&h).unwrap();
    assert_eq!(c.verdict, Verdict::Fail);
    let grad = c.part("|grad W|^2 <= 0 + 36 W").unwrap();
    assert_eq!(grad.verdict, Verdict::Fail);
    // |∇W|² / W grows like ρ², so far rows fail even with much larger constants
    let big = check_gradient_condition(&g, &w, 100.0, 1000.0, &scope, "rows 1..=30");
    assert_eq!(big.verdict, Verdict::Fail);
    let k = 30;
    let x = VertexId::Cell(k, 1);
    assert!(grad_squared_fn(&g, &w, &x).unwrap() > 1000.0 * w.at(&x).unwrap());
}

#[test]
fn decomposition_feeds_the_theorem_check() {
    let g = TriangularGraph::infinite();
    let m = PathMetric::degree_path(&g);
    let d = corollary_decomposition(&m, &triangular_potential_fn(), &rows_hypotheses(&m, 40, 1.0, 4.0)).unwrap();
    assert!(d.certificate.is_pass(), "{}", d.certificate);
    let r = 0.5 * (triangular_rho_closed_form(40) + triangular_rho_closed_form(41));
    let h = SelfAdjointHypotheses {
        metric: &m,
        scope: TriangularGraph::rows_range(1, 40),
        scope_name: "rows 1..=40".into(),
        potential: d.potential.clone(),
        c1: d.c1,
        c2: d.c2,
        balls: vec![BallQuery { center: TriangularGraph::origin(), radius: r, budget: usize::MAX }],
    };
    let c = certify_hypotheses(&h).unwrap();
    assert!(c.is_pass(), "{c}");
    let b_star = c.parts.iter().find(|p| p.condition.starts_with("(B*)")).unwrap();
    assert!((b_star.value("sup_deg").unwrap() - 40f64.sqrt()).abs() < 1e-12);
}

#[test]
fn theorem_check_rejects_bad_configuration() {
    let g = TriangularGraph::infinite();
    let m = PathMetric::degree_path(&g);
    let mk = |scope: Vec<VertexId>, c1: f64, split: bool| SelfAdjointHypotheses {
        metric: &m,
        scope,
        scope_name: "s".into(),
        potential: if split {
            Potential::from_split(VertexFunction::constant(1.0), VertexFunction::constant(1.0))
        } else {
            Potential::zero()
        },
        c1,
        c2: 1.0,
        balls: vec![],
    };
    let one = vec![TriangularGraph::origin()];
    assert!(matches!(certify_hypotheses(&mk(vec![], 0.0, true)), Err(Error::Config(_))));
    assert!(matches!(certify_hypotheses(&mk(one.clone(), -1.0, true)), Err(Error::Config(_))));
    assert!(matches!(certify_hypotheses(&mk(one.clone(), 0.0, false)), Err(Error::Config(_))));
    assert!(certify_hypotheses(&mk(one, 0.0, true)).unwrap().is_pass());
}

#[test]
fn constant_fit_without_quadratic_term_needs_growing_b1() {
    let g = TriangularGraph::infinite();
    let m = PathMetric::degree_path(&g);
    for rows in [4u32, 25, 100] {
        let fit = fit_growth_constants(&m, &TriangularGraph::origin(), &triangular_potential_fn(), &TriangularGraph::rows_range(1, rows), &[0.0, 4.0], usize::MAX).unwrap();
        assert!((fit[0].1 - (rows as f64).sqrt()).abs() < 1e-12);
        // with b2 = 4 the bound k^{1/2} <= 1 + 4 rho^2 leaves b1 at most 1
        assert!(fit[1].1 <= 1.0);
    }
}

/// Path `0 - 1 - ... - n-1` with `b = μ = 1` and the steep weight `W(i) = 100 (i+1)²`.
fn steep_path(n: u64) -> (FiniteGraph, VertexFunction, Vec<VertexId>) {
    let vs = (0..n).map(|i| (VertexId::Index(i), 1.0)).collect();
    let es = (1..n).map(|i| (VertexId::Index(i - 1), VertexId::Index(i), 1.0)).collect();
    let g = FiniteGraph::new(vs, es).unwrap();
    let w = VertexFunction::from_fn("W = 100 (i+1)^2", |x| match x {
        VertexId::Index(i) => Some(100.0 * ((i + 1) as f64).powi(2)),
        _ => None,
    });
    let inner = interior(&g, &(0..n).map(VertexId::Index).collect::<Vec<_>>()).unwrap();
    (g, w, inner)
}

#[test]
fn adversarial_witness_separates_tight_and_shrunken_constants() {
    let (g, w, inner) = steep_path(200);
    let c2 = inner.iter().map(|x| grad_squared_fn(&g, &w, x).unwrap() / w.at(x).unwrap()).fold(0.0, f64::max);
    assert!(check_gradient_condition(&g, &w, 0.0, c2, &inner, "interior").is_pass());
    let (u, ratio) = adversarial_real_witness(&g, &w, &inner).unwrap();
    assert!(ratio < -c2 / 100.0, "ratio {ratio}, c2 {c2}");
    let pass = audit_real_inequality(&g, &w, &w, 0.0, c2, &u);
    assert!(pass.is_pass(), "{pass}");
    let fail = audit_real_inequality(&g, &w, &w, 0.0, c2 / 100.0, &u);
    assert_eq!(fail.verdict, Verdict::Fail);
    assert!(audit_imag_inequality(&g, &w, &w, 0.0, c2, &u).is_pass());
}

#[test]
fn corollary_audits_on_triangular_interiors() {
    let g = TriangularGraph::infinite();
    let d = corollary_on_rows(&g, 20, 1.0, 4.0).unwrap();
    let inner = interior(&g, &TriangularGraph::rows_range(1, 20)).unwrap();
    let (u, ratio) = adversarial_real_witness(&g, d.w(), &inner).unwrap();
    assert!(ratio >= -36.0);
    assert!(audit_real_inequality(&g, d.u(), d.w(), 0.0, 36.0, &u).is_pass());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn audits_never_fail_under_the_decomposition(seed in any::<u64>(), rows in 3u32..15) {
        let g = TriangularGraph::infinite();
        let d = corollary_on_rows(&g, rows, 1.0, 4.0).unwrap();
        let inner = interior(&g, &TriangularGraph::rows_range(1, rows)).unwrap();
        let s = run_audits(&g, d.u(), d.w(), d.c1, d.c2, &inner, "interior", 20, seed, 25);
        prop_assert_eq!(s.real_violations + s.imag_violations + s.inconclusive, 0, "{}", s.certificate);
    }
}
