//! Graph and potential sources shared by the subcommands.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::Serialize;

use graphsa::graph::FiniteGraph;
use graphsa::operator::{PotentialDoc, VertexFunction};
use graphsa::scope::Scope;
use graphsa::zoo::{build_family, triangular_potential_fn, FamilyGraph, FamilySpec};
use graphsa::{VertexId, WeightedGraph};

#[derive(Debug, Clone, Args, Serialize)]
pub struct GraphArgs {
    /// Graph JSON file ({"vertices":[..],"edges":[..]}).
    #[arg(long, conflicts_with = "family")]
    pub graph: Option<PathBuf>,

    /// Family name (`triangular`), inline generator JSON, or a generator
    /// spec file. Defaults to the triangular graph.
    #[arg(long)]
    pub family: Option<String>,

    /// Rows of the triangular graph in scope.
    #[arg(long)]
    pub rows: Option<u32>,

    /// `triangular`, `zero`, or a potential JSON file
    /// ({"values":{"id":v,..},"default":0}).
    #[arg(long)]
    pub potential: Option<String>,
}

pub struct Loaded {
    pub graph: FamilyGraph,
    pub potential: VertexFunction,
    /// Rows in scope when the graph is the infinite triangular family.
    pub rows: Option<u32>,
    pub name: String,
    /// `V = -k^{1/2}` on row `k`.
    pub triangular_potential: bool,
}

impl Loaded {
    pub fn is_triangular(&self) -> bool {
        self.graph.as_triangular().is_some()
    }

    /// Rows for triangular-only operations, falling back to `default`.
    pub fn triangular_rows(&self, default: u32) -> Result<u32> {
        if !self.is_triangular() {
            bail!("this operation needs the triangular family, got {}", self.name);
        }
        Ok(self.rows.unwrap_or(default))
    }

    /// The explicit scope, else `rows:1..K` on the triangular family, else
    /// every vertex of a finite graph.
    pub fn scope(&self, scope: Option<&Scope>, default_rows: u32) -> Result<(Vec<VertexId>, String)> {
        let scope = match scope {
            Some(s) => s.clone(),
            None if self.is_triangular() && self.graph.vertices().is_none() => Scope::Rows(1, self.rows.unwrap_or(default_rows)),
            None => Scope::All,
        };
        let vs = scope.resolve(&self.graph).with_context(|| format!("resolving scope {scope}"))?;
        Ok((vs, scope.to_string()))
    }

    pub fn vertex(&self, id: &str) -> Result<VertexId> {
        let x: VertexId = id.parse().expect("infallible");
        if !self.graph.contains(&x) {
            bail!("vertex {x} is not in {}", self.name);
        }
        Ok(x)
    }
}

fn family_spec(family: &str, rows: Option<u32>) -> Result<FamilySpec> {
    let text = family.trim();
    if text == "triangular" {
        return Ok(FamilySpec::Triangular { rows: None });
    }
    let json = if text.starts_with('{') {
        text.to_string()
    } else if std::path::Path::new(text).is_file() {
        std::fs::read_to_string(text).with_context(|| format!("reading {text}"))?
    } else {
        bail!("unknown family {text:?}; use `triangular`, inline JSON such as {{\"family\":\"path\",\"n\":10}}, or a spec file");
    };
    let spec: FamilySpec = serde_json::from_str(&json).with_context(|| format!("parsing family spec {json}"))?;
    if rows.is_some() && !matches!(spec, FamilySpec::Triangular { .. }) {
        bail!("--rows only applies to the triangular family");
    }
    Ok(spec)
}

impl GraphArgs {
    pub fn load(&self) -> Result<Loaded> {
        let (graph, rows) = match (&self.graph, &self.family) {
            (Some(path), _) => {
                let g = FiniteGraph::read(path).with_context(|| format!("reading graph {}", path.display()))?;
                (FamilyGraph::Finite(g), None)
            }
            (None, family) => {
                let spec = family_spec(family.as_deref().unwrap_or("triangular"), self.rows)?;
                if let FamilySpec::Triangular { rows: Some(r) } = spec {
                    // a finite triangular spec is a truncation, not a scope
                    (build_family(&FamilySpec::Triangular { rows: Some(r) })?, None)
                } else {
                    (build_family(&spec)?, self.rows)
                }
            }
        };
        if self.rows == Some(0) {
            bail!("--rows must be at least 1");
        }
        let name = graph.describe();
        let triangular_potential = match self.potential.as_deref() {
            None => graph.as_triangular().is_some(),
            Some(p) => p == "triangular",
        };
        let potential = match self.potential.as_deref() {
            _ if triangular_potential => triangular_potential_fn(),
            None | Some("zero") => VertexFunction::zero(),
            Some(path) => PotentialDoc::read(path).with_context(|| format!("reading potential {path}"))?.to_function("V"),
        };
        Ok(Loaded { graph, potential, rows, name, triangular_potential })
    }

    pub fn given(&self) -> bool {
        self.graph.is_some() || self.family.is_some()
    }
}
