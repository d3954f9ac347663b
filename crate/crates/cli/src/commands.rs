use std::path::Path;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde_json::json;

use graphsa::certify::{
    certify_hypotheses, corollary_decomposition, interior, run_audits, BallQuery, CorollaryHypotheses, Decomposition, SelfAdjointHypotheses,
};
use graphsa::golenia::{lambda_admissible, run_criterion, RayPath};
use graphsa::graph::{weighted_degree, FiniteGraph};
use graphsa::metrics::{incident_edges, JumpMode, JumpSize};
use graphsa::operator::{apply_operator, apply_to, check_green, CcFunction, Potential, SplitDoc};
use graphsa::probe::{deficiency_probe, eigen_bottom, radial_reduce, triangular_eigen_trend, truncate_to, HEURISTIC_BANNER};
use graphsa::report::{reproduce_example, stage_golenia, triangular_jump_size, write_report, ExampleConfig};
use graphsa::sampling::{identity_trial, random_cc_function, stream_rng};
use graphsa::scope::Scope;
use graphsa::zoo::{triangular_potential, triangular_rho_closed_form, TriangularGraph};
use graphsa::{exec, Certificate, PathMetric, Tolerance, Verdict, VertexId, WeightedGraph, Witness};

use crate::output::{timestamp, Report};
use crate::plot::{write_csv, write_svg, Series};
use crate::source::{GraphArgs, Loaded};
use crate::{CertifyCmd, Cli, Command, GoleniaCmd, MetricCmd, OpCmd, ProbeCmd, ReproduceArgs, ToleranceArgs, ZooCmd};

pub fn run(cli: &Cli) -> Result<Verdict> {
    let name = match &cli.command {
        Command::Zoo(ZooCmd::Build { .. }) => "zoo build",
        Command::Zoo(ZooCmd::Info { .. }) => "zoo info",
        Command::Metric(MetricCmd::Rho { .. }) => "metric rho",
        Command::Metric(MetricCmd::IntrinsicCheck { .. }) => "metric intrinsic-check",
        Command::Metric(MetricCmd::JumpSize { .. }) => "metric jump-size",
        Command::Op(OpCmd::Apply { .. }) => "op apply",
        Command::Op(OpCmd::GreenCheck { .. }) => "op green-check",
        Command::Certify(CertifyCmd::Corollary { .. }) => "certify corollary",
        Command::Certify(CertifyCmd::Theorem { .. }) => "certify theorem",
        Command::Certify(CertifyCmd::Audit { .. }) => "certify audit",
        Command::Golenia(GoleniaCmd::Run { .. }) => "golenia run",
        Command::Probe(ProbeCmd::Eig { .. }) => "probe eig",
        Command::Probe(ProbeCmd::Deficiency { .. }) => "probe deficiency",
        Command::ReproduceExample(_) => "reproduce-example",
    };
    let mut r = Report::new(name, serde_json::to_value(cli)?, cli.seed);
    let seed = cli.seed;
    match &cli.command {
        Command::Zoo(ZooCmd::Build { graph, out }) => zoo_build(graph, out, &mut r)?,
        Command::Zoo(ZooCmd::Info { family, row }) => zoo_info(family, *row, &mut r)?,
        Command::Metric(MetricCmd::Rho { graph, from, to, budget }) => metric_rho(graph, from, to, *budget, &mut r)?,
        Command::Metric(MetricCmd::IntrinsicCheck { graph, scope }) => {
            let l = graph.load()?;
            let (vs, scope_name) = l.scope(scope.as_ref(), 30)?;
            r.certify(PathMetric::degree_path(&l.graph).check_intrinsic(&vs, &scope_name));
        }
        Command::Metric(MetricCmd::JumpSize { graph, scope, exact, budget }) => {
            let l = graph.load()?;
            let mode = if *exact { JumpMode::Exact { budget: *budget } } else { JumpMode::EdgeLengthBound };
            let (js, complete) = jump_size(&l, scope.as_ref(), mode)?;
            let mut c = Certificate::new("finite jump size", js.scope.clone()).with_value("s", js.s);
            if !(js.certified || complete) {
                c.mark_inconclusive("only the enumerated edges are covered; no analytic bound for the rest of the graph");
            }
            r.certify(c);
            r.set("jump", &js)?;
        }
        Command::Op(OpCmd::Apply { graph, f, at }) => op_apply(graph, f, at.as_deref(), &mut r)?,
        Command::Op(OpCmd::GreenCheck { graph, scope, trials, max_support, tol }) => {
            green_check(graph, scope.as_ref(), *trials, *max_support, tol, seed, &mut r)?
        }
        Command::Certify(CertifyCmd::Corollary { graph, scope, b1, b2, origin, budget }) => {
            let l = graph.load()?;
            let d = corollary(&l, scope.as_ref(), *b1, *b2, origin.as_deref(), *budget)?;
            r.set("c1", d.c1)?;
            r.set("c2", d.c2)?;
            r.certify(d.certificate);
        }
        Command::Certify(CertifyCmd::Theorem { graph, scope, split, c1, c2, balls, budget }) => {
            let l = graph.load()?;
            let (vs, scope_name) = l.scope(scope.as_ref(), 30)?;
            let potential = match split {
                Some(p) => read_split(p)?,
                None if l.is_triangular() && l.triangular_potential => corollary(&l, scope.as_ref(), 1.0, 4.0, None, usize::MAX)?.potential,
                None => bail!("--split is required for {}", l.name),
            };
            let balls = balls.iter().map(|b| parse_ball(&l, b, *budget)).collect::<Result<Vec<_>>>()?;
            let metric = PathMetric::degree_path(&l.graph);
            let h = SelfAdjointHypotheses { metric: &metric, scope: vs, scope_name, potential, c1: *c1, c2: *c2, balls };
            r.certify(certify_hypotheses(&h)?);
        }
        Command::Certify(CertifyCmd::Audit { graph, scope, split, b1, b2, c1, c2, samples, max_support }) => {
            let l = graph.load()?;
            let (u, w, c1, c2, inner, scope_name) = match split {
                Some(p) => {
                    let s = read_split(p)?.split.expect("split file yields a split");
                    let (vs, name) = l.scope(scope.as_ref(), 30)?;
                    (s.u, s.w, *c1, *c2, interior(&l.graph, &vs)?, format!("interior of {name}"))
                }
                None => {
                    let d = corollary(&l, scope.as_ref(), *b1, *b2, None, usize::MAX)?;
                    let (vs, name) = l.scope(scope.as_ref(), 30)?;
                    let out = (d.u().clone(), d.w().clone(), d.c1, d.c2, interior(&l.graph, &vs)?, format!("interior of {name}"));
                    r.certify(d.certificate);
                    out
                }
            };
            if inner.is_empty() {
                bail!("the scope has no interior vertices to audit");
            }
            let s = run_audits(&l.graph, &u, &w, c1, c2, &inner, &scope_name, *samples, seed, *max_support);
            r.certify(s.certificate.clone());
            r.set("audit", json!({
                "samples": s.samples,
                "real_violations": s.real_violations,
                "imag_violations": s.imag_violations,
                "inconclusive": s.inconclusive,
                "min_relative_slack_okazawa": s.min_relative_slack_okazawa,
                "min_relative_slack_chain": s.min_relative_slack_chain,
                "min_relative_slack_imag": s.min_relative_slack_imag,
            }))?;
        }
        Command::Golenia(GoleniaCmd::Run { graph, spine, delta, lambda, n }) => golenia(graph, spine, *delta, *lambda, *n, &mut r)?,
        Command::Probe(ProbeCmd::Eig { graph, scope, bottom, trend, plot_dir }) => {
            probe_eig(graph, scope.as_ref(), *bottom, trend, plot_dir.as_deref(), &mut r)?
        }
        Command::Probe(ProbeCmd::Deficiency { graph, z, u1, plot_dir }) => probe_deficiency(graph, z, u1, plot_dir.as_deref(), &mut r)?,
        Command::ReproduceExample(args) => reproduce(args, seed, cli.no_timestamp, &mut r)?,
    }
    if !cli.no_timestamp {
        r.timestamp = Some(timestamp());
    }
    r.emit(cli.report.as_deref())?;
    Ok(r.verdict)
}

fn zoo_build(graph: &GraphArgs, out: &Path, r: &mut Report) -> Result<()> {
    let l = graph.load()?;
    let finite = match (l.graph.vertices(), l.rows) {
        (Some(vs), _) => FiniteGraph::induced(&l.graph, &vs)?,
        (None, Some(k)) if l.is_triangular() => {
            let t = TriangularGraph::truncated(k);
            FiniteGraph::induced(&t, &TriangularGraph::rows_range(1, k))?
        }
        _ => bail!("{} is infinite; pass --rows or a finite generator spec", l.name),
    };
    let doc = finite.to_doc();
    std::fs::write(out, serde_json::to_string_pretty(&doc)?).with_context(|| format!("writing {}", out.display()))?;
    r.set("out", out)?;
    r.set("vertices", finite.len())?;
    r.set("edges", finite.edge_count())
}

fn zoo_info(family: &str, k: u32, r: &mut Report) -> Result<()> {
    if family != "triangular" {
        bail!("closed forms are only known for the triangular family");
    }
    if k == 0 {
        bail!("rows start at 1");
    }
    let g = TriangularGraph::infinite();
    let x = VertexId::Cell(k, 1);
    let deg = weighted_degree(&g, &x)?;
    let mu = g.mu(&x)?;
    let mut c = Certificate::new("closed forms of mu and Deg", format!("row {k}"));
    for (what, got, want) in [("mu", mu, TriangularGraph::mu_closed_form(k)), ("Deg", deg, TriangularGraph::deg_closed_form(k))] {
        if !((got - want).abs() <= 1e-12 * want) {
            c.fail(Witness::new(vec![x.to_string()], got, format!("{what} closed form {want}")));
        }
    }
    r.certify(c);
    r.set("row", k)?;
    r.set("vertices_in_row", k)?;
    r.set("neighbors", TriangularGraph::degree_count_closed_form(k))?;
    r.set("mu", TriangularGraph::mu_closed_form(k))?;
    r.set("deg", TriangularGraph::deg_closed_form(k))?;
    r.set("v", triangular_potential(k))?;
    r.set("rho", triangular_rho_closed_form(k))?;
    r.set("sigma_to_next_row", TriangularGraph::sigma_closed_form(k))
}

fn metric_rho(graph: &GraphArgs, from: &str, to: &str, budget: usize, r: &mut Report) -> Result<()> {
    let l = graph.load()?;
    let (x, y) = (l.vertex(from)?, l.vertex(to)?);
    let rho = PathMetric::degree_path(&l.graph).shortest_rho(&x, &y, budget)?;
    if !rho.exact {
        r.verdict = r.verdict.and(Verdict::Inconclusive);
    }
    r.set("rho", rho.rho)?;
    r.set("exact", rho.exact)
}

fn max_row(vs: &[VertexId]) -> Option<u32> {
    vs.iter().filter_map(VertexId::row).max()
}

/// Jump size over the edges touching the scope, and whether those are all
/// the edges of the graph.
fn jump_size(l: &Loaded, scope: Option<&Scope>, mode: JumpMode) -> Result<(JumpSize, bool)> {
    let metric = PathMetric::degree_path(&l.graph);
    let (vs, name) = l.scope(scope, 100)?;
    if l.is_triangular() && mode == JumpMode::EdgeLengthBound {
        // every edge between rows k and k+1 has the same length
        return Ok((triangular_jump_size(&metric, max_row(&vs).unwrap_or(1))?, false));
    }
    let edges = incident_edges(&l.graph, &vs)?;
    let complete = l.graph.vertices().is_some_and(|all| all.len() == vs.len());
    Ok((metric.jump_size_over(&edges, None, mode, &format!("edges touching {name}"))?, complete))
}

fn corollary(l: &Loaded, scope: Option<&Scope>, b1: f64, b2: f64, origin: Option<&str>, budget: usize) -> Result<Decomposition> {
    let metric = PathMetric::degree_path(&l.graph);
    let (vs, scope_name) = l.scope(scope, 30)?;
    let o = match origin {
        Some(id) => l.vertex(id)?,
        None if l.is_triangular() => TriangularGraph::origin(),
        None => vs.first().cloned().context("empty scope")?,
    };
    let (jump, complete) = jump_size(l, scope, JumpMode::EdgeLengthBound)?;
    let jump = JumpSize { certified: jump.certified || complete, ..jump };
    let h = CorollaryHypotheses { o, b1, b2, jump, scope: vs, scope_name, budget };
    Ok(corollary_decomposition(&metric, &l.potential, &h)?)
}

fn read_split(path: &Path) -> Result<Potential> {
    Ok(SplitDoc::read(path).with_context(|| format!("reading split {}", path.display()))?.to_potential())
}

fn parse_ball(l: &Loaded, s: &str, budget: usize) -> Result<BallQuery> {
    let (center, radius) = s.rsplit_once('@').with_context(|| format!("ball {s:?} is not CENTER@RADIUS"))?;
    let radius: f64 = radius.trim().parse().with_context(|| format!("bad radius in ball {s:?}"))?;
    if !(radius >= 0.0) {
        bail!("ball radius must be nonnegative, got {radius}");
    }
    Ok(BallQuery { center: l.vertex(center)?, radius, budget })
}

fn op_apply(graph: &GraphArgs, f: &Path, at: Option<&str>, r: &mut Report) -> Result<()> {
    let l = graph.load()?;
    let f = CcFunction::read(f).with_context(|| format!("reading function {}", f.display()))?;
    if let Some(x) = f.support().find(|x| !l.graph.contains(x)) {
        bail!("function is supported on {x}, which is not in {}", l.name);
    }
    let v = Potential::new(l.potential.clone());
    match at {
        Some(id) => {
            let x = l.vertex(id)?;
            let value = apply_operator(&l.graph, &v, &f, &x)?;
            r.set("at", &x)?;
            r.set("value", [value.re, value.im])
        }
        None => {
            let lf = apply_to(&l.graph, &v, &f)?;
            r.data.insert("values".into(), serde_json::to_value(&lf)?["values"].take());
            Ok(())
        }
    }
}

/// Floors for user tolerances: a few ulps relative, the smallest normal absolute.
const REL_FLOOR: f64 = 4.0 * f64::EPSILON;
const ABS_FLOOR: f64 = f64::MIN_POSITIVE;

fn tolerance(t: &ToleranceArgs) -> Result<Tolerance> {
    if !(t.rel_tol.is_finite() && t.abs_tol.is_finite()) {
        bail!("tolerances must be finite");
    }
    let (rel, abs) = (t.rel_tol.max(REL_FLOOR), t.abs_tol.max(ABS_FLOOR));
    if rel != t.rel_tol || abs != t.abs_tol {
        eprintln!("warning: tolerance raised to the floor (rel {rel:e}, abs {abs:e})");
    }
    Ok(Tolerance::new(rel, abs))
}

fn green_check(graph: &GraphArgs, scope: Option<&Scope>, trials: usize, max_support: usize, tol: &ToleranceArgs, seed: u64, r: &mut Report) -> Result<()> {
    let tol = tolerance(tol)?;
    let (certs, scope_name) = if graph.given() {
        let l = graph.load()?;
        let (vs, name) = l.scope(scope, 30)?;
        let certs = exec::map_range(0..trials, |i| {
            let mut rng = stream_rng(seed, i as u64);
            let f = random_cc_function(&mut rng, &vs, max_support);
            let u = random_cc_function(&mut rng, &vs, max_support);
            check_green(&l.graph, &l.potential, &f, &u, tol)
        });
        (certs, name)
    } else {
        let certs = exec::map_range(0..trials, |i| {
            let t = identity_trial(seed, i as u64, 50);
            check_green(&t.graph, &t.w, &t.f, &t.u, tol)
        });
        (certs, "random graphs".to_string())
    };
    let mut c = Certificate::new(format!("Green's formula ({trials} trials, seed {seed})"), scope_name);
    let mut bad = 0;
    for (i, t) in certs.into_iter().enumerate() {
        if !t.is_pass() {
            bad += 1;
            if bad <= graphsa::certificate::MAX_WITNESSES {
                c.push_part(Certificate { condition: format!("trial {i}: {}", t.condition), ..t });
            }
        }
    }
    c.push_value("trials", trials as f64);
    c.push_value("failing_trials", bad as f64);
    r.set("tolerance", json!({ "rel": tol.rel, "abs": tol.abs }))?;
    r.certify(c);
    Ok(())
}

fn parse_spine(l: &Loaded, spine: &str, n: usize) -> Result<(RayPath, Option<u32>)> {
    let (kind, rest) = spine.split_once(':').with_context(|| format!("spine {spine:?} is not column:J or ids:x;y;.."))?;
    match kind {
        "column" => {
            let j: u32 = rest.trim().parse().with_context(|| format!("bad column in {spine:?}"))?;
            if !l.is_triangular() || j == 0 {
                bail!("column spines need the triangular family and J >= 1");
            }
            Ok((RayPath::new(&l.graph, RayPath::triangular_column(j, n).vertices, format!("triangular column {j}"))?, Some(j)))
        }
        "ids" => {
            let ids: Vec<VertexId> = rest.split(';').filter(|s| !s.trim().is_empty()).map(|s| s.parse().expect("infallible")).take(n).collect();
            Ok((RayPath::new(&l.graph, ids, "user list")?, None))
        }
        _ => bail!("unknown spine kind {kind:?}; expected column or ids"),
    }
}

fn golenia(graph: &GraphArgs, spine: &str, delta: f64, lambda: f64, n: usize, r: &mut Report) -> Result<()> {
    if !(delta > 0.0 && delta.is_finite() && lambda.is_finite()) || n == 0 {
        bail!("need delta > 0, finite lambda and n >= 1");
    }
    let l = graph.load()?;
    let (path, column) = parse_spine(&l, spine, n)?;
    let run = if column == Some(1) && l.triangular_potential && l.graph.vertices().is_none() {
        // the example's spine: closed form and factorial bound on top
        let (c, run) = stage_golenia(&l.graph, n, delta, lambda);
        r.certify(c);
        run.context("Golenia run failed")?
    } else {
        r.certify(lambda_admissible(&l.graph, &l.potential, lambda, &path.vertices, &path.provenance));
        run_criterion(&l.graph, &l.potential, &path, delta, lambda)?
    };
    r.set("S_N", run.partial_sums.last())?;
    r.set("trend", run.trend.label())?;
    r.set("a", &run.a)?;
    r.set("log_a", &run.log_a)?;
    r.set("partial_sums", &run.partial_sums)?;
    r.set("ratios", &run.ratios)?;
    r.set("path", &run.path)
}

fn plot_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn probe_eig(graph: &GraphArgs, scope: Option<&Scope>, bottom: usize, trend: &[u32], plots: Option<&Path>, r: &mut Report) -> Result<()> {
    let l = graph.load()?;
    let (vs, _) = l.scope(scope, 30)?;
    let t = truncate_to(&l.graph, &Potential::new(l.potential.clone()), &vs)?;
    let e = eigen_bottom(&t, bottom.min(t.len()))?;
    r.banner = Some(HEURISTIC_BANNER.into());
    r.set("size", t.len())?;
    r.set("eigenvalues", &e.values)?;
    r.set("residuals", &e.residuals)?;
    r.set("method", &e.method)?;
    let points = if trend.is_empty() {
        vec![]
    } else {
        if !(l.is_triangular() && l.triangular_potential) {
            bail!("--trend tracks the triangular example only");
        }
        triangular_eigen_trend(trend, 1)?
    };
    if !points.is_empty() {
        r.set("trend", &points)?;
    }
    if let Some(dir) = plots {
        plot_dir(dir)?;
        write_csv(&dir.join("eigenvalues.csv"), &["index", "eigenvalue", "residual"], e.values.iter().zip(&e.residuals).enumerate().map(|(i, (v, res))| vec![i as f64, *v, *res]))?;
        if !points.is_empty() {
            let series: Vec<(f64, f64)> = points.iter().map(|p| (p.rows as f64, p.bottom[0])).collect();
            write_csv(&dir.join("lambda_min.csv"), &["rows", "size", "lambda_min"], points.iter().map(|p| vec![p.rows as f64, p.size as f64, p.bottom[0]]))?;
            write_svg(&dir.join("lambda_min.svg"), "bottom eigenvalue of the truncation (heuristic)", "rows K", "lambda_min", &[Series { name: "lambda_min", points: series }])?;
        }
    }
    Ok(())
}

fn probe_deficiency(graph: &GraphArgs, z: &str, u1: &str, plots: Option<&Path>, r: &mut Report) -> Result<()> {
    let l = graph.load()?;
    let rows = l.triangular_rows(400)?;
    let z: Complex64 = z.trim().parse().map_err(|e| anyhow::anyhow!("bad --z {z:?}: {e:?}"))?;
    let u1: Complex64 = u1.trim().parse().map_err(|e| anyhow::anyhow!("bad --u1 {u1:?}: {e:?}"))?;
    let radial = radial_reduce(&l.graph, &l.potential, rows)?;
    let d = deficiency_probe(&radial, z, rows, u1)?;
    r.banner = Some(d.banner.clone());
    r.set("z", d.z)?;
    r.set("rows", d.rows)?;
    r.set("label", &d.label)?;
    r.set("log10_partial_norms", &d.log10_partial_norms)?;
    r.set("log10_abs_u", &d.log10_abs_u)?;
    if let Some(dir) = plots {
        plot_dir(dir)?;
        let ks = 1..=d.log10_partial_norms.len();
        write_csv(&dir.join("partial_norms.csv"), &["K", "log10_S_K", "log10_abs_u"], ks.clone().zip(d.log10_partial_norms.iter().zip(&d.log10_abs_u)).map(|(k, (s, u))| vec![k as f64, *s, *u]))?;
        let series = ks.zip(&d.log10_partial_norms).map(|(k, s)| (k as f64, *s)).collect();
        write_svg(&dir.join("partial_norms.svg"), &format!("radial partial norms, z = {z} (heuristic)"), "K", "log10 S_K", &[Series { name: "log10 S_K", points: series }])?;
    }
    Ok(())
}

fn reproduce(args: &ReproduceArgs, seed: u64, no_timestamp: bool, r: &mut Report) -> Result<()> {
    let config = ExampleConfig { seed, ..args.rows.map(ExampleConfig::reduced).unwrap_or_default() };
    let mut rep = reproduce_example(&config);
    if !no_timestamp {
        rep.timestamp = Some(timestamp());
    }
    let path = write_report(&rep, &args.out).with_context(|| format!("writing report into {}", args.out.display()))?;

    let dir = &args.out;
    write_csv(&dir.join("rayleigh.csv"), &["k", "brute_force", "closed_form"], rep.rayleigh.iter().map(|x| vec![x.row as f64, x.brute_force, x.closed_form]))?;
    let q = rep.rayleigh.iter().map(|x| (x.row as f64, x.brute_force)).collect();
    write_svg(&dir.join("rayleigh.svg"), "two-row Rayleigh quotients", "k", "(L u, u) / (u, u)", &[Series { name: "quotient", points: q }])?;
    if let Some(gt) = &rep.golenia {
        write_csv(&dir.join("golenia.csv"), &["n", "a_n", "S_N"], gt.a.iter().zip(&gt.partial_sums).enumerate().map(|(i, (a, s))| vec![(i + 1) as f64, *a, *s]))?;
        let s = gt.partial_sums.iter().enumerate().map(|(i, s)| ((i + 1) as f64, *s)).collect();
        write_svg(&dir.join("golenia.svg"), "Golenia partial sums on the spine", "N", "S_N", &[Series { name: "S_N", points: s }])?;
    }
    write_csv(&dir.join("rho.csv"), &["k", "closed_form", "dijkstra_min", "dijkstra_max"], rep.rho.iter().map(|x| vec![x.row as f64, x.closed_form, x.dijkstra_min, x.dijkstra_max]))?;

    for s in &rep.failing_stages {
        eprintln!("stage failed: {s}");
    }
    r.verdict = rep.verdict;
    r.set("report_path", &path)?;
    r.set("failing_stages", &rep.failing_stages)?;
    r.set("stages", rep.stages.iter().map(|c| json!({ "stage": c.condition, "verdict": c.verdict })).collect::<Vec<_>>())
}
