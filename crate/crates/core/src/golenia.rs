//! Golénia's comparison criterion along vertex rays:
//! `a_1 = 1`, `a_n = Π_{j<n} [(δ/Deg(y_j))² + (1 + (λ + V(y_j))/Deg(y_j))²]`,
//! and the partial sums of `Σ a_n μ(y_n)`, whose divergence the criterion needs.
//!
//! Divergence is not decidable from finitely many terms, so the run only
//! reports a trend label next to the exact data. The triangular example's
//! inconclusiveness is shown by the term-by-term factorial bound.

use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Slack, Witness};
use crate::error::{Error, Result};
use crate::graph::{weighted_degree, VertexId, WeightedGraph};
use crate::numeric::{KahanSum, Tolerance};
use crate::operator::VertexFunction;

/// Vertices `y_1, y_2, ...` with `y_j ~ y_{j+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayPath {
    pub vertices: Vec<VertexId>,
    pub provenance: String,
}

impl RayPath {
    /// Checks consecutive adjacency against `g`.
    pub fn new<G: WeightedGraph + ?Sized>(g: &G, vertices: Vec<VertexId>, provenance: impl Into<String>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::domain("a ray needs at least one vertex"));
        }
        for x in &vertices {
            if !g.contains(x) {
                return Err(Error::UnknownVertex(x.clone()));
            }
        }
        for pair in vertices.windows(2) {
            if g.edge_weight(&pair[0], &pair[1])? <= 0.0 {
                return Err(Error::domain(format!("{} and {} are not adjacent", pair[0], pair[1])));
            }
        }
        Ok(RayPath { vertices, provenance: provenance.into() })
    }

    /// Column `j` of the triangular graph: `x_{j,j}, x_{j+1,j}, ...`, `n` vertices.
    pub fn triangular_column(j: u32, n: usize) -> Self {
        let vertices = (0..n as u32).map(|i| VertexId::Cell(j + i, j)).collect();
        RayPath { vertices, provenance: format!("triangular column {j}") }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// `λ + Deg(x) + V(x) != 0` on `scope`.
pub fn lambda_admissible<G: WeightedGraph + ?Sized>(g: &G, v: &VertexFunction, lambda: f64, scope: &[VertexId], scope_name: &str) -> Certificate {
    let mut cert = Certificate::new(format!("lambda + Deg + V != 0 (lambda = {lambda})"), scope_name);
    let tol = Tolerance::new(1e-12, 1e-12);
    let mut slack = Slack::default();
    let outcomes = crate::exec::map(scope, |x| Ok::<_, Error>((weighted_degree(g, x)?, v.at(x)?)));
    for (x, o) in scope.iter().zip(outcomes) {
        match o {
            Ok((deg, pot)) => {
                let value = lambda + deg + pot;
                let allowance = tol.allowance(lambda.abs() + deg.abs() + pot.abs());
                slack.observe(value.abs() - allowance, x);
                if value.abs() <= allowance {
                    cert.fail(Witness::new(vec![x.to_string()], value, "lambda + Deg + V vanishes"));
                }
            }
            Err(e) => cert.mark_inconclusive(format!("{x}: {e}")),
        }
    }
    cert.slack = Some(slack);
    cert
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    AppearsConvergent,
    AppearsDivergent,
    Inconclusive,
}

impl Trend {
    pub fn label(self) -> &'static str {
        match self {
            Trend::AppearsConvergent => "series appears convergent (heuristic)",
            Trend::AppearsDivergent => "series appears divergent (heuristic)",
            Trend::Inconclusive => "trend inconclusive (heuristic)",
        }
    }
}

/// One evaluation of the criterion along a ray; index `i` holds `n = i + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoleniaRun {
    pub delta: f64,
    pub lambda: f64,
    pub path: RayPath,
    pub mu: Vec<f64>,
    /// `log a_n`
    pub log_a: Vec<f64>,
    pub a: Vec<f64>,
    /// `a_n μ(y_n)`
    pub terms: Vec<f64>,
    /// `S_N = Σ_{n <= N} a_n μ(y_n)`
    pub partial_sums: Vec<f64>,
    /// `a_{n+1} μ(y_{n+1}) / (a_n μ(y_n))`
    pub ratios: Vec<f64>,
    pub trend: Trend,
}

fn factor(delta: f64, lambda: f64, deg: f64, v: f64) -> f64 {
    let p = delta / deg;
    let q = 1.0 + (lambda + v) / deg;
    p * p + q * q
}

/// The factors `[(δ/Deg)² + (1 + (λ+V)/Deg)²]` at `y_1 .. y_{n-1}`.
pub fn factors<G: WeightedGraph + ?Sized>(g: &G, v: &VertexFunction, path: &RayPath, delta: f64, lambda: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(path.len().saturating_sub(1));
    for (j, y) in path.vertices.iter().enumerate().take(path.len().saturating_sub(1)) {
        let deg = weighted_degree(g, y)?;
        if deg <= 0.0 {
            return Err(Error::inconclusive(format!("Deg({y}) = {deg}; factor {} undefined", j + 1)));
        }
        let f = factor(delta, lambda, deg, v.at(y)?);
        if !(f > 0.0 && f.is_finite()) {
            return Err(Error::inconclusive(format!("factor {} at {y} is {f}; ratio undefined", j + 1)));
        }
        out.push(f);
    }
    Ok(out)
}

/// Plain running product of `factors`, for cross-checking the log-domain path.
pub fn direct_products(factors: &[f64]) -> Vec<f64> {
    let mut out = vec![1.0];
    let mut p = 1.0;
    for f in factors {
        p *= f;
        out.push(p);
    }
    out
}

pub fn run_criterion<G: WeightedGraph + ?Sized>(g: &G, v: &VertexFunction, path: &RayPath, delta: f64, lambda: f64) -> Result<GoleniaRun> {
    if !(delta > 0.0) {
        return Err(Error::domain(format!("delta must be positive, got {delta}")));
    }
    let fs = factors(g, v, path, delta, lambda)?;
    let mu = path.vertices.iter().map(|y| g.mu(y)).collect::<Result<Vec<_>>>()?;
    let mut log_a = Vec::with_capacity(path.len());
    let mut acc = KahanSum::new();
    log_a.push(0.0);
    for f in &fs {
        acc.add(f.ln());
        log_a.push(acc.value());
    }
    let a: Vec<f64> = log_a.iter().map(|l| l.exp()).collect();
    let log_terms: Vec<f64> = log_a.iter().zip(&mu).map(|(l, m)| l + m.ln()).collect();
    let terms: Vec<f64> = log_terms.iter().map(|l| l.exp()).collect();
    // plain running sums: with nonnegative terms they are nondecreasing,
    // which a compensated running value need not be
    let partial_sums = terms
        .iter()
        .scan(0.0, |acc, t| {
            *acc += t;
            Some(*acc)
        })
        .collect();
    let ratios: Vec<f64> = log_terms.windows(2).map(|w| (w[1] - w[0]).exp()).collect();
    let trend = classify(&ratios);
    Ok(GoleniaRun { delta, lambda, path: path.clone(), mu, log_a, a, terms, partial_sums, ratios, trend })
}

/// Ratio-test style label from the last third of the ratios.
fn classify(ratios: &[f64]) -> Trend {
    if ratios.len() < 6 {
        return Trend::Inconclusive;
    }
    let tail = &ratios[ratios.len() - ratios.len() / 3..];
    let max = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = tail.iter().copied().fold(f64::INFINITY, f64::min);
    if max < 0.9 {
        Trend::AppearsConvergent
    } else if min >= 1.0 {
        Trend::AppearsDivergent
    } else {
        Trend::Inconclusive
    }
}

/// `ln((n-1)!)`, compensated.
fn ln_factorial(m: usize) -> f64 {
    (2..=m).map(|j| (j as f64).ln()).collect::<KahanSum>().value()
}

/// `a_n μ(y_n) <= 2 √n (δ + |λ|)^{2n-2} / (n-1)!` for `n >= 2`, and
/// `|S_N - S_{N-1}| / S_N < 1e-12` for every computed `N >= 60`.
pub fn check_factorial_bound(run: &GoleniaRun) -> Certificate {
    let n_max = run.terms.len();
    let mut cert = Certificate::new("Golenia terms under the factorial bound", format!("n = 1..={n_max} on {}", run.path.provenance));
    let base = (run.delta + run.lambda.abs()).ln();
    let mut slack = Slack::default();
    for n in 2..=n_max {
        let log_term = run.log_a[n - 1] + run.mu[n - 1].ln();
        let log_bound = 2f64.ln() + 0.5 * (n as f64).ln() + (2 * n - 2) as f64 * base - ln_factorial(n - 1);
        // compare logarithms: absolute log error is relative error of the values
        let gap = log_bound - log_term;
        slack.observe(gap, format!("n = {n}"));
        if gap < -1e-12 * log_bound.abs().max(1.0) {
            cert.fail(Witness::new(vec![run.path.vertices[n - 1].to_string()], gap, format!("term {n} exceeds the bound")));
        }
    }
    cert.slack = Some(slack);
    let mut stable = Certificate::new("S_N stabilized for N >= 60", cert.scope.clone());
    for n in 60..=n_max {
        let (s, prev) = (run.partial_sums[n - 1], run.partial_sums[n - 2]);
        let change = (s - prev).abs() / s;
        if !(change < 1e-12) {
            stable.fail(Witness::new(vec![format!("N = {n}")], change, "partial sums still moving"));
        }
    }
    if let Some(&last) = run.partial_sums.last() {
        stable.push_value("S_N", last);
    }
    cert.push_part(stable);
    cert
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FiniteGraph;
    use crate::zoo::{triangular_potential_fn, TriangularGraph};

    #[test]
    fn spine_products_are_factorial() {
        let g = TriangularGraph::infinite();
        let path = RayPath::new(&g, RayPath::triangular_column(1, 8).vertices, "spine").unwrap();
        let run = run_criterion(&g, &triangular_potential_fn(), &path, 1.0, 1.0).unwrap();
        assert!((run.a[2] - 2.0).abs() < 1e-14);
        assert!((run.a[4] - 2.0 / 3.0).abs() < 1e-14);
        assert_eq!(run.a[0], 1.0);
    }

    #[test]
    fn single_vertex_ray() {
        let g = TriangularGraph::infinite();
        let path = RayPath::triangular_column(1, 1);
        let run = run_criterion(&g, &triangular_potential_fn(), &path, 1.0, 1.0).unwrap();
        assert_eq!(run.a, vec![1.0]);
        assert_eq!(run.partial_sums, vec![2.0]);
        assert!(check_factorial_bound(&run).is_pass());
    }

    #[test]
    fn admissibility_on_triangular() {
        let g = TriangularGraph::infinite();
        let scope = TriangularGraph::rows_range(1, 30);
        let v = triangular_potential_fn();
        assert!(lambda_admissible(&g, &v, 1.0, &scope, "rows").is_pass());
        let zero = lambda_admissible(&g, &v, 0.0, &scope, "rows");
        assert_eq!(zero.violations, scope.len());
        let p = FiniteGraph::new(
            vec![(VertexId::Index(0), 1.0), (VertexId::Index(1), 1.0)],
            vec![(VertexId::Index(0), VertexId::Index(1), 1.0)],
        )
        .unwrap();
        let all = vec![VertexId::Index(0), VertexId::Index(1)];
        assert!(lambda_admissible(&p, &VertexFunction::zero(), 0.0, &all, "all").is_pass());
    }

    #[test]
    fn rejects_non_adjacent_ray() {
        let g = TriangularGraph::infinite();
        assert!(RayPath::new(&g, vec![VertexId::Cell(1, 1), VertexId::Cell(3, 1)], "bad").is_err());
    }

    #[test]
    fn inflated_terms_break_the_bound() {
        let g = TriangularGraph::infinite();
        let path = RayPath::triangular_column(1, 20);
        let mut run = run_criterion(&g, &triangular_potential_fn(), &path, 1.0, 1.0).unwrap();
        run.log_a[10] += 20.0;
        let cert = check_factorial_bound(&run);
        assert!(!cert.is_pass());
        assert_eq!(cert.witnesses[0].vertices, vec!["11,1".to_string()]);
    }
}
