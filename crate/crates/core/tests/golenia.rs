use proptest::prelude::*;

use graphsa::golenia::{check_factorial_bound, direct_products, factors, lambda_admissible, run_criterion, RayPath, Trend};
use graphsa::operator::VertexFunction;
use graphsa::zoo::{build_family, triangular_potential_fn, FamilySpec, TriangularGraph};
use graphsa::VertexId;

fn chain(n: u64, birth_exp: f64, mu_exp: f64) -> graphsa::zoo::FamilyGraph {
    build_family(&FamilySpec::BirthDeath { n: Some(n), birth: 1.0, birth_exp, mu: 1.0, mu_exp }).unwrap()
}

proptest! {
    #[test]
    fn log_domain_matches_direct_products(
        birth_exp in -1.0f64..2.0,
        mu_exp in -1.0f64..2.0,
        delta in 0.1f64..3.0,
        lambda in -3.0f64..3.0,
        amp in 0.0f64..2.0,
        n in 2usize..=50,
    ) {
        let g = chain(n as u64 + 1, birth_exp, mu_exp);
        let v = VertexFunction::from_fn("V = amp sin(i)", move |x| match x {
            VertexId::Index(i) => Some(amp * (*i as f64).sin()),
            _ => None,
        });
        let path = RayPath::new(&g, (0..n as u64).map(VertexId::Index).collect(), "chain").unwrap();
        let run = run_criterion(&g, &v, &path, delta, lambda).unwrap();
        let direct = direct_products(&factors(&g, &v, &path, delta, lambda).unwrap());
        for ((a, d), l) in run.a.iter().zip(&direct).zip(&run.log_a) {
            prop_assert!(l.is_finite());
            // the direct product is only comparable while it is representable
            if d.is_normal() {
                prop_assert!(*a > 0.0);
                prop_assert!((a - d).abs() <= 1e-12 * d.abs(), "{} vs {}", a, d);
            }
        }
        for w in run.partial_sums.windows(2) {
            prop_assert!(w[1] >= w[0]);
        }
    }

    #[test]
    fn spine_closed_form(n in 1usize..=50) {
        let g = TriangularGraph::infinite();
        let run = run_criterion(&g, &triangular_potential_fn(), &RayPath::triangular_column(1, n), 1.0, 1.0).unwrap();
        let mut expect = 1.0f64;
        for (i, a) in run.a.iter().enumerate() {
            if i > 0 {
                expect *= 2.0 / i as f64;
            }
            prop_assert!((a - expect).abs() <= 1e-12 * expect);
        }
    }
}

#[test]
fn spine_stabilizes_and_obeys_the_bound() {
    let g = TriangularGraph::infinite();
    let run = run_criterion(&g, &triangular_potential_fn(), &RayPath::triangular_column(1, 150), 1.0, 1.0).unwrap();
    assert!(check_factorial_bound(&run).is_pass());
    assert_eq!(run.trend, Trend::AppearsConvergent);
    // S_N -> Σ 2^{n-1} 2 √n / (n-1)! stays finite
    let last = *run.partial_sums.last().unwrap();
    assert!(last > 24.0 && last < 25.0);
}

#[test]
fn free_chain_terms_do_not_decay() {
    // V = 0 on the unit path: factor (δ/2)² + (1 + λ/2)² >= 1 for λ >= 0
    let g = chain(200, 0.0, 0.0);
    let path = RayPath::new(&g, (1..150).map(VertexId::Index).collect(), "interior").unwrap();
    let run = run_criterion(&g, &VertexFunction::zero(), &path, 1.0, 1.0).unwrap();
    assert_eq!(run.trend, Trend::AppearsDivergent);
}

#[test]
fn other_triangular_columns_run() {
    let g = TriangularGraph::infinite();
    for j in [2u32, 5, 17] {
        let path = RayPath::new(&g, RayPath::triangular_column(j, 40).vertices, format!("column {j}")).unwrap();
        let run = run_criterion(&g, &triangular_potential_fn(), &path, 1.0, 1.0).unwrap();
        assert!(run.partial_sums.iter().all(|s| s.is_finite()));
    }
}

#[test]
fn admissibility_fails_only_where_lambda_cancels() {
    let g = TriangularGraph::infinite();
    let scope = TriangularGraph::rows_range(1, 20);
    assert!(lambda_admissible(&g, &triangular_potential_fn(), 1.0, &scope, "rows").is_pass());
    assert!(!lambda_admissible(&g, &triangular_potential_fn(), 0.0, &scope, "rows").is_pass());
}
