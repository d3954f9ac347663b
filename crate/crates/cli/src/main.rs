#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use graphsa::scope::Scope;
use graphsa::Verdict;

mod commands;
mod output;
mod plot;
mod source;

use source::GraphArgs;

/// Self-adjointness hypotheses, metrics and spectral probes for Schrödinger
/// operators on weighted graphs.
///
/// Exit status: 0 when every requested certificate passes, 2 when one fails,
/// 3 when one is inconclusive, 1 on malformed input.
#[derive(Debug, Parser, Serialize)]
#[command(name = "graphsa", version)]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "GRAPHSA_THREADS")]
    threads: Option<usize>,

    /// Master seed; recorded in every report.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "FILE")]
    report: Option<PathBuf>,

    /// Leave the timestamp out of reports.
    #[arg(long, global = true)]
    no_timestamp: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Built-in graph families.
    #[command(subcommand)]
    Zoo(ZooCmd),
    /// Intrinsic metric queries.
    #[command(subcommand)]
    Metric(MetricCmd),
    /// Operator application and identity checks.
    #[command(subcommand)]
    Op(OpCmd),
    /// Hypothesis certificates and inequality audits.
    #[command(subcommand)]
    Certify(CertifyCmd),
    /// Golénia's summability criterion along a ray.
    #[command(subcommand)]
    Golenia(GoleniaCmd),
    /// Heuristic spectral diagnostics.
    #[command(subcommand)]
    Probe(ProbeCmd),
    /// Run the whole triangular example and write a consolidated report.
    ReproduceExample(ReproduceArgs),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ZooCmd {
    /// Materialize a finite truncation as graph JSON.
    Build {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Closed forms of μ, Deg, V and ρ on a row of the triangular graph.
    Info {
        #[arg(long, default_value = "triangular")]
        family: String,
        #[arg(long)]
        row: u32,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum MetricCmd {
    /// Degree-path distance between two vertices.
    Rho {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Maximum number of settled vertices.
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// Check Σ_y b(x,y) ρ(x,y)² <= μ(x) on a scope.
    IntrinsicCheck {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        scope: Option<Scope>,
    },
    /// Jump size sup{ρ(x,y) : x ~ y} over the edges touching a scope.
    JumpSize {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        scope: Option<Scope>,
        /// Compute ρ per edge instead of bounding it by the edge length.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
}

#[derive(Debug, Args, Serialize)]
struct ToleranceArgs {
    /// Relative tolerance for identity checks.
    #[arg(long, default_value_t = 1e-12)]
    rel_tol: f64,
    /// Absolute floor for identity checks.
    #[arg(long, default_value_t = 1e-14)]
    abs_tol: f64,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum OpCmd {
    /// Apply L_V to a finitely supported function.
    Apply {
        #[command(flatten)]
        graph: GraphArgs,
        /// CcFunction JSON: {"values":{"id":[re,im],...}}.
        #[arg(long)]
        f: PathBuf,
        /// Evaluate at a single vertex only.
        #[arg(long)]
        at: Option<String>,
    },
    /// Green's formula on random finitely supported functions.
    ///
    /// Without a graph source every trial draws a random graph, potential
    /// and pair of functions.
    GreenCheck {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        scope: Option<Scope>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 30)]
        max_support: usize,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum CertifyCmd {
    /// Build W = b1 + b2 (ρ + s)², U = V + W and check the growth conditions.
    Corollary {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        scope: Option<Scope>,
        #[arg(long, default_value_t = 1.0)]
        b1: f64,
        #[arg(long, default_value_t = 4.0)]
        b2: f64,
        /// Base point o of ρ(o, ·).
        #[arg(long)]
        origin: Option<String>,
        #[arg(long, default_value_t = usize::MAX)]
        budget: usize,
    },
    /// Check the theorem's hypotheses for a split V = U - W.
    Theorem {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        scope: Option<Scope>,
        /// Split JSON: {"u":{"values":{..}},"w":{"values":{..}}}. The
        /// triangular family defaults to its corollary split.
        #[arg(long)]
        split: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0)]
        c1: f64,
        #[arg(long, default_value_t = 36.0)]
        c2: f64,
        /// (B*) ball as CENTER@RADIUS; repeatable.
        #[arg(long = "ball")]
        balls: Vec<String>,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// Seeded audits of the two proof inequalities on random complex u.
    Audit {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        scope: Option<Scope>,
        #[arg(long)]
        split: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        b1: f64,
        #[arg(long, default_value_t = 4.0)]
        b2: f64,
        /// Used with --split; the corollary split brings its own.
        #[arg(long, default_value_t = 0.0)]
        c1: f64,
        #[arg(long, default_value_t = 36.0)]
        c2: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 40)]
        max_support: usize,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum GoleniaCmd {
    /// Products a_n and partial sums S_N along a ray.
    Run {
        #[command(flatten)]
        graph: GraphArgs,
        /// column:J (triangular) or ids:x;y;...
        #[arg(long, default_value = "column:1")]
        spine: String,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 100)]
        n: usize,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ProbeCmd {
    /// Bottom eigenvalues of the Dirichlet truncation to a scope.
    Eig {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        scope: Option<Scope>,
        #[arg(long, default_value_t = 5)]
        bottom: usize,
        /// Also track λ_min over these triangular truncations (comma separated).
        #[arg(long, value_delimiter = ',')]
        trend: Vec<u32>,
        /// Write CSV and SVG line charts here.
        #[arg(long)]
        plot_dir: Option<PathBuf>,
    },
    /// ℓ² growth of the radial solution of (L - z) u = 0.
    Deficiency {
        #[command(flatten)]
        graph: GraphArgs,
        /// Spectral parameter, e.g. 0+1i.
        #[arg(long, default_value = "0+1i", allow_hyphen_values = true)]
        z: String,
        /// Initial value u(1).
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        u1: String,
        #[arg(long)]
        plot_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Args, Serialize)]
struct ReproduceArgs {
    #[arg(long, default_value = "report")]
    out: PathBuf,
    /// Shrink every stage to this many rows.
    #[arg(long)]
    rows: Option<u32>,
}

fn exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::Pass => 0,
        Verdict::Fail => 2,
        Verdict::Inconclusive => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    graphsa::exec::init_threads(cli.threads);
    match commands::run(&cli) {
        Ok(v) => ExitCode::from(exit_code(v)),
        Err(e) => {
            eprintln!("error: {e:#}");
            let inconclusive = e.chain().any(|c| c.downcast_ref::<graphsa::Error>().is_some_and(|g| g.is_inconclusive()));
            ExitCode::from(if inconclusive { 3 } else { 1 })
        }
    }
}
