//! End-to-end reproduction of the triangular example as one report.
//!
//! Each stage is a [`Certificate`]; the stage functions are public so tests
//! can run them at other scopes. The pipeline is generic over the graph so a
//! deliberately broken copy of the example can be pushed through it.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Slack, Verdict, Witness};
use crate::certify::{corollary_decomposition, interior, run_audits, CorollaryHypotheses, Decomposition};
use crate::error::{Error, Result};
use crate::exec;
use crate::golenia::{check_factorial_bound, lambda_admissible, run_criterion, GoleniaRun, RayPath};
use crate::graph::{weighted_degree, VertexId, WeightedGraph};
use crate::metrics::{JumpMode, JumpSize, PathMetric};
use crate::numeric::Tolerance;
use crate::zoo::{triangular_potential_fn, triangular_rho_table, two_row_rayleigh_closed_form, two_row_rayleigh_on, TriangularGraph};

pub const REPORT_SCHEMA: &str = "graphsa/example-report/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleConfig {
    pub degree_rows: u32,
    pub metric_rows: u32,
    pub bound_rows: u32,
    pub corollary_rows: u32,
    pub b1: f64,
    pub b2: f64,
    pub rayleigh_rows: Vec<u32>,
    pub golenia_terms: usize,
    pub delta: f64,
    pub lambda: f64,
    pub audit_rows: u32,
    pub audit_samples: usize,
    pub audit_max_support: usize,
    pub seed: u64,
}

impl Default for ExampleConfig {
    fn default() -> Self {
        ExampleConfig {
            degree_rows: 10_000,
            metric_rows: 200,
            bound_rows: 10_000,
            corollary_rows: 1000,
            b1: 1.0,
            b2: 4.0,
            rayleigh_rows: vec![1, 4, 16, 64, 100],
            golenia_terms: 100,
            delta: 1.0,
            lambda: 1.0,
            audit_rows: 30,
            audit_samples: 200,
            audit_max_support: 40,
            seed: 42,
        }
    }
}

impl ExampleConfig {
    /// Every row-indexed stage cut down to `rows` (at least 2).
    pub fn reduced(rows: u32) -> Self {
        let rows = rows.max(2);
        ExampleConfig {
            degree_rows: rows,
            metric_rows: rows,
            bound_rows: rows,
            corollary_rows: rows,
            rayleigh_rows: (1..rows).collect(),
            golenia_terms: rows as usize,
            audit_rows: rows,
            audit_samples: 20,
            audit_max_support: 6,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoRow {
    pub row: u32,
    pub closed_form: f64,
    pub dijkstra_min: f64,
    pub dijkstra_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayleighRow {
    pub row: u32,
    pub brute_force: f64,
    pub closed_form: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoleniaTable {
    pub a: Vec<f64>,
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub trend: String,
}

impl From<&GoleniaRun> for GoleniaTable {
    fn from(run: &GoleniaRun) -> Self {
        GoleniaTable { a: run.a.clone(), terms: run.terms.clone(), partial_sums: run.partial_sums.clone(), trend: run.trend.label().into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleReport {
    pub schema: String,
    pub version: String,
    pub graph: String,
    pub config: ExampleConfig,
    pub verdict: Verdict,
    pub failing_stages: Vec<String>,
    pub stages: Vec<Certificate>,
    pub rho: Vec<RhoRow>,
    pub rayleigh: Vec<RayleighRow>,
    pub golenia: Option<GoleniaTable>,
    /// The only field allowed to differ between identical runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl ExampleReport {
    /// Pretty JSON; the timestamp is left out unless `with_timestamp`.
    pub fn to_json(&self, with_timestamp: bool) -> Result<String> {
        if with_timestamp || self.timestamp.is_none() {
            return Ok(serde_json::to_string_pretty(self)?);
        }
        let mut copy = self.clone();
        copy.timestamp = None;
        Ok(serde_json::to_string_pretty(&copy)?)
    }

    pub fn stage(&self, name: &str) -> Option<&Certificate> {
        self.stages.iter().find(|c| c.condition == name)
    }
}

fn stage_error(name: &str, scope: impl Into<String>, e: Error) -> Certificate {
    let mut c = Certificate::new(name, scope);
    match e {
        Error::Inconclusive(why) => c.mark_inconclusive(why),
        e => c.fail(Witness::new(vec![], f64::NAN, e.to_string())),
    }
    c
}

/// Vertices checked in row `k`: all of them up to row 200, beyond that the
/// two ends and the middle (rows are orbits of the automorphism group).
fn degree_sample(k: u32) -> Vec<VertexId> {
    if k <= 200 {
        TriangularGraph::row_cells(k).collect()
    } else {
        let mut js = vec![1, k.div_ceil(2), k];
        js.dedup();
        js.into_iter().map(|j| VertexId::Cell(k, j)).collect()
    }
}

/// `Deg(x_{k,j}) = k^{1/2}` to `1e-12` relative on rows `1..=rows`.
pub fn stage_degrees<G: WeightedGraph + ?Sized>(g: &G, rows: u32) -> Certificate {
    let name = "degree closed form";
    let scope = format!("rows 1..={rows}");
    let ks: Vec<u32> = (1..=rows).collect();
    let tol = Tolerance::new(1e-12, 0.0);
    let per_row = exec::map(&ks, |&k| {
        let expect = TriangularGraph::deg_closed_form(k);
        degree_sample(k)
            .into_iter()
            .map(|x| weighted_degree(g, &x).map(|d| (x, d, expect)))
            .collect::<Result<Vec<_>>>()
    });
    let mut cert = Certificate::new(name, scope);
    let mut slack = Slack::default();
    let mut checked = 0usize;
    for r in per_row {
        match r {
            Ok(rows) => {
                for (x, d, expect) in rows {
                    checked += 1;
                    let err = (d - expect).abs();
                    slack.observe(tol.allowance(expect) - err, &x);
                    if !tol.close(d, expect, expect) {
                        cert.fail(Witness::new(vec![x.to_string()], d, format!("Deg = {d}, closed form {expect}")));
                    }
                }
            }
            Err(e) => cert.mark_inconclusive(e.to_string()),
        }
    }
    cert.push_value("vertices_checked", checked as f64);
    cert.slack = Some(slack);
    cert
}

/// Dijkstra `ρ_σ(o, ·)` against the closed-form sum to `1e-10`, and
/// equidistance of every row from `o`.
pub fn stage_metric<G: WeightedGraph + ?Sized>(g: &G, rows: u32) -> (Certificate, Vec<RhoRow>) {
    let name = "degree-path distance closed form";
    let scope = format!("rows 1..={rows}");
    let metric = PathMetric::degree_path(g);
    let targets = TriangularGraph::rows_range(1, rows);
    let dist = match metric.distances_to(&TriangularGraph::origin(), &targets, usize::MAX) {
        Ok(d) => d,
        Err(e) => return (stage_error(name, scope, e), vec![]),
    };
    let closed = triangular_rho_table(rows);
    let mut cert = Certificate::new(name, scope);
    let mut slack = Slack::default();
    let mut table = Vec::with_capacity(rows as usize);
    for k in 1..=rows {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for x in TriangularGraph::row_cells(k) {
            let d = dist.get(&x).copied().unwrap_or(f64::INFINITY);
            lo = lo.min(d);
            hi = hi.max(d);
            let err = (d - closed[k as usize]).abs();
            slack.observe(1e-10 - err, &x);
            if !(err <= 1e-10) {
                cert.fail(Witness::new(vec![x.to_string()], d, format!("closed form {}", closed[k as usize])));
            }
        }
        if !(hi - lo <= 1e-10) {
            cert.fail(Witness::new(vec![format!("row {k}")], hi - lo, "row not equidistant from o"));
        }
        table.push(RhoRow { row: k, closed_form: closed[k as usize], dijkstra_min: lo, dijkstra_max: hi });
    }
    cert.slack = Some(slack);
    (cert, table)
}

/// `k^{3/2} <= 4 ρ_σ(o, x_k)²` for `2 <= k <= rows`, closed form.
pub fn stage_growth_bound(rows: u32) -> Certificate {
    let mut cert = Certificate::new("k^{3/2} <= 4 rho^2", format!("rows 2..={rows} (closed form)"));
    let rho = triangular_rho_table(rows);
    let mut slack = Slack::default();
    for k in 2..=rows {
        let lhs = (k as f64).powf(1.5);
        let rhs = 4.0 * rho[k as usize] * rho[k as usize];
        slack.observe((rhs - lhs) / lhs, format!("row {k}"));
        // equality holds at k = 2, so allow rounding
        if lhs > rhs * (1.0 + 1e-12) {
            cert.fail(Witness::new(vec![format!("row {k}")], rhs - lhs, "growth bound violated"));
        }
    }
    cert.slack = Some(slack);
    cert
}

/// Jump size of the degree-path metric: one representative edge per pair of
/// consecutive rows (all edges between two rows have the same length), with
/// the analytic bound `2^{-1/4}` covering the infinite family.
pub fn triangular_jump_size<G: WeightedGraph + ?Sized>(metric: &PathMetric<'_, G>, rows: u32) -> Result<JumpSize> {
    let edges: Vec<(VertexId, VertexId)> = (1..rows.max(2)).map(|k| (VertexId::Cell(k, 1), VertexId::Cell(k + 1, 1))).collect();
    metric.jump_size_over(&edges, Some(2f64.powf(-0.25)), JumpMode::EdgeLengthBound, &format!("edges between rows 1..={}", rows.max(2)))
}

/// Corollary decomposition with `(b1, b2)` on rows `1..=rows`.
pub fn corollary_on_rows<G: WeightedGraph + ?Sized>(g: &G, rows: u32, b1: f64, b2: f64) -> Result<Decomposition> {
    let metric = PathMetric::degree_path(g);
    let jump = triangular_jump_size(&metric, rows)?;
    let h = CorollaryHypotheses {
        o: TriangularGraph::origin(),
        b1,
        b2,
        jump,
        scope: TriangularGraph::rows_range(1, rows),
        scope_name: format!("rows 1..={rows}"),
        budget: usize::MAX,
    };
    corollary_decomposition(&metric, &triangular_potential_fn(), &h)
}

pub fn stage_rayleigh<G: WeightedGraph + ?Sized>(g: &G, ks: &[u32]) -> (Certificate, Vec<RayleighRow>) {
    let mut cert = Certificate::new("two-row Rayleigh quotients", format!("rows {ks:?}"));
    let mut table = Vec::new();
    for &k in ks {
        match two_row_rayleigh_on(g, k) {
            Ok(q) => {
                let closed = two_row_rayleigh_closed_form(k);
                if !((q - closed).abs() <= 1e-10) {
                    cert.fail(Witness::new(vec![format!("row {k}")], q, format!("closed form {closed}")));
                }
                table.push(RayleighRow { row: k, brute_force: q, closed_form: closed });
            }
            Err(e) => cert.mark_inconclusive(format!("row {k}: {e}")),
        }
    }
    for w in table.windows(2) {
        if !(w[1].brute_force < w[0].brute_force) {
            cert.fail(Witness::new(vec![format!("rows {} -> {}", w[0].row, w[1].row)], w[1].brute_force, "quotient not decreasing"));
        }
    }
    if let Some(r) = table.iter().find(|r| r.row == 100) {
        cert.push_value("quotient_at_100", r.brute_force);
        if !(r.brute_force <= -4.9) {
            cert.fail(Witness::new(vec!["row 100".into()], r.brute_force, "quotient above -4.9"));
        }
    }
    (cert, table)
}

/// `a_n = 2^{n-1}/(n-1)!` on the spine (to `1e-10` relative, `n <= 50`),
/// the factorial bound, stabilization, and λ-admissibility on the spine.
pub fn stage_golenia<G: WeightedGraph + ?Sized>(g: &G, n: usize, delta: f64, lambda: f64) -> (Certificate, Option<GoleniaRun>) {
    let name = "Golenia criterion on the spine";
    let path = match RayPath::new(g, RayPath::triangular_column(1, n).vertices, "spine x_{n,1}") {
        Ok(p) => p,
        Err(e) => return (stage_error(name, format!("n = 1..={n}"), e), None),
    };
    let v = triangular_potential_fn();
    let run = match run_criterion(g, &v, &path, delta, lambda) {
        Ok(r) => r,
        Err(e) => return (stage_error(name, format!("n = 1..={n}"), e), None),
    };
    let mut cert = Certificate::new(name, format!("n = 1..={n}, delta = {delta}, lambda = {lambda}"));
    cert.push_part(lambda_admissible(g, &v, lambda, &path.vertices, "spine"));
    if delta == 1.0 && lambda == 1.0 {
        let mut closed = Certificate::new("a_n = 2^{n-1}/(n-1)!", format!("n = 1..={}", n.min(50)));
        let mut expect = 1.0f64;
        for (i, a) in run.a.iter().enumerate().take(50) {
            if i > 0 {
                expect *= 2.0 / i as f64;
            }
            if !((a - expect).abs() <= 1e-10 * expect) {
                closed.fail(Witness::new(vec![format!("n = {}", i + 1)], *a, format!("closed form {expect}")));
            }
        }
        cert.push_part(closed);
    }
    cert.push_part(check_factorial_bound(&run));
    cert.push_value("S_N", run.partial_sums.last().copied().unwrap_or(f64::NAN));
    (cert, Some(run))
}

/// Runs every stage on `g`, which must use the triangular vertex labels and
/// the triangular potential's row structure.
pub fn reproduce_on<G: WeightedGraph + ?Sized>(g: &G, config: &ExampleConfig) -> ExampleReport {
    let mut stages = vec![stage_degrees(g, config.degree_rows)];
    let (metric, rho) = stage_metric(g, config.metric_rows);
    stages.push(metric);
    stages.push(stage_growth_bound(config.bound_rows));
    match corollary_on_rows(g, config.corollary_rows, config.b1, config.b2) {
        Ok(d) => stages.push(d.certificate),
        Err(e) => stages.push(stage_error("corollary decomposition", format!("rows 1..={}", config.corollary_rows), e)),
    }
    // the audits reuse a decomposition on their own (smaller) scope
    let audit_scope = format!("interior of rows 1..={}", config.audit_rows);
    match corollary_on_rows(g, config.audit_rows, config.b1, config.b2).and_then(|d| {
        let inner = interior(g, &TriangularGraph::rows_range(1, config.audit_rows))?;
        Ok((d, inner))
    }) {
        Ok((d, inner)) => {
            let s = run_audits(g, d.u(), d.w(), d.c1, d.c2, &inner, &audit_scope, config.audit_samples, config.seed, config.audit_max_support);
            stages.push(s.certificate);
        }
        Err(e) => stages.push(stage_error("proof inequality audits", audit_scope, e)),
    }
    let (rayleigh_cert, rayleigh) = stage_rayleigh(g, &config.rayleigh_rows);
    stages.push(rayleigh_cert);
    let (golenia_cert, run) = stage_golenia(g, config.golenia_terms, config.delta, config.lambda);
    stages.push(golenia_cert);
    let verdict = stages.iter().fold(Verdict::Pass, |v, c| v.and(c.verdict));
    let failing_stages = stages.iter().filter(|c| !c.is_pass()).map(|c| c.condition.clone()).collect();
    ExampleReport {
        schema: REPORT_SCHEMA.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        graph: g.describe(),
        config: config.clone(),
        verdict,
        failing_stages,
        stages,
        rho,
        rayleigh,
        golenia: run.as_ref().map(GoleniaTable::from),
        timestamp: None,
    }
}

pub fn reproduce_example(config: &ExampleConfig) -> ExampleReport {
    reproduce_on(&TriangularGraph::infinite(), config)
}

/// Writes `report.json` into `out_dir`, with the timestamp when one is set.
pub fn write_report(report: &ExampleReport, out_dir: &Path) -> Result<std::path::PathBuf> {
    std::fs::create_dir_all(out_dir)?;
    let path = out_dir.join("report.json");
    std::fs::write(&path, report.to_json(true)?)?;
    Ok(path)
}
