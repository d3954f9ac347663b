//! Built-in graph families: the triangular graph with its closed forms, and
//! simple stock families used as oracles in tests.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{FiniteGraph, VertexId, WeightedGraph};
use crate::operator::{apply_to, inner_product, CcFunction, Potential, VertexFunction};

/// Rows `k >= 1` with `k` vertices each; every vertex of row `k` is joined
/// to every vertex of row `k + 1` with `b = 1`, and `μ = 2 k^{1/2}` on row `k`.
///
/// With `rows: None` the graph is infinite; with `Some(K)` it is the induced
/// subgraph on rows `1..=K` (so row `K` lacks its forward neighbors).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriangularGraph {
    pub rows: Option<u32>,
}

impl TriangularGraph {
    pub fn infinite() -> Self {
        TriangularGraph { rows: None }
    }

    pub fn truncated(rows: u32) -> Self {
        TriangularGraph { rows: Some(rows) }
    }

    pub fn origin() -> VertexId {
        VertexId::Cell(1, 1)
    }

    fn has_row(&self, k: u32) -> bool {
        k >= 1 && self.rows.is_none_or(|r| k <= r)
    }

    fn check(&self, x: &VertexId) -> Result<(u32, u32)> {
        match *x {
            VertexId::Cell(k, j) if self.has_row(k) && (1..=k).contains(&j) => Ok((k, j)),
            _ => Err(Error::UnknownVertex(x.clone())),
        }
    }

    pub fn row_cells(k: u32) -> impl Iterator<Item = VertexId> {
        (1..=k).map(move |j| VertexId::Cell(k, j))
    }

    /// All vertices of rows `from..=to`.
    pub fn rows_range(from: u32, to: u32) -> Vec<VertexId> {
        (from.max(1)..=to).flat_map(Self::row_cells).collect()
    }

    /// `μ` on row `k`.
    pub fn mu_closed_form(k: u32) -> f64 {
        2.0 * (k as f64).sqrt()
    }

    /// Unweighted degree `deg(x_{k,j}) = 2k` in the infinite graph.
    pub fn degree_count_closed_form(k: u32) -> u64 {
        2 * k as u64
    }

    /// `Deg(x_{k,j}) = k^{1/2}` in the infinite graph.
    pub fn deg_closed_form(k: u32) -> f64 {
        (k as f64).sqrt()
    }

    /// Degree-path edge length between rows `k` and `k + 1`: `(k+1)^{-1/4}`.
    pub fn sigma_closed_form(k: u32) -> f64 {
        ((k + 1) as f64).powf(-0.25)
    }

    /// Number of edges of the truncation to rows `1..=rows`.
    pub fn edge_count(rows: u32) -> u64 {
        (1..rows as u64).map(|k| k * (k + 1)).sum()
    }
}

impl WeightedGraph for TriangularGraph {
    fn describe(&self) -> String {
        match self.rows {
            None => "triangular graph (infinite)".into(),
            Some(r) => format!("triangular graph (rows 1..={r})"),
        }
    }

    fn contains(&self, x: &VertexId) -> bool {
        self.check(x).is_ok()
    }

    fn mu(&self, x: &VertexId) -> Result<f64> {
        let (k, _) = self.check(x)?;
        Ok(Self::mu_closed_form(k))
    }

    fn for_each_neighbor(&self, x: &VertexId, visit: &mut dyn FnMut(&VertexId, f64)) -> Result<()> {
        let (k, _) = self.check(x)?;
        if k >= 2 {
            for j in 1..k {
                visit(&VertexId::Cell(k - 1, j), 1.0);
            }
        }
        if self.has_row(k + 1) {
            for j in 1..=k + 1 {
                visit(&VertexId::Cell(k + 1, j), 1.0);
            }
        }
        Ok(())
    }

    fn edge_weight(&self, x: &VertexId, y: &VertexId) -> Result<f64> {
        let (k1, _) = self.check(x)?;
        match self.check(y) {
            Ok((k2, _)) if k1.abs_diff(k2) == 1 => Ok(1.0),
            _ => Ok(0.0),
        }
    }

    fn vertices(&self) -> Option<Vec<VertexId>> {
        self.rows.map(|r| Self::rows_range(1, r))
    }

    fn row(&self, k: u32) -> Option<Vec<VertexId>> {
        self.has_row(k).then(|| Self::row_cells(k).collect())
    }
}

/// `V(x) = -k^{1/2}` on row `k`.
pub fn triangular_potential(k: u32) -> f64 {
    -(k as f64).sqrt()
}

/// The triangular potential as a vertex function.
pub fn triangular_potential_fn() -> VertexFunction {
    VertexFunction::from_fn("V = -sqrt(row)", |x| x.row().map(triangular_potential))
}

/// `ρ_σ(o, x) = Σ_{j=1}^{k-1} (j+1)^{-1/4}` for `x` in row `k`, summed in
/// the order a search from `o` accumulates it.
pub fn triangular_rho_closed_form(k: u32) -> f64 {
    (1..k).map(TriangularGraph::sigma_closed_form).fold(0.0, |acc, s| acc + s)
}

/// Closed forms for every row `1..=k` at once.
pub fn triangular_rho_table(k: u32) -> Vec<f64> {
    let mut out = Vec::with_capacity(k as usize + 1);
    out.push(0.0);
    let mut acc = 0.0;
    for j in 1..=k {
        if j >= 2 {
            acc += TriangularGraph::sigma_closed_form(j - 1);
        }
        out.push(acc);
    }
    out
}

/// `-2k(k+1) / (2k^{3/2} + 2(k+1)^{3/2})`.
pub fn two_row_rayleigh_closed_form(k: u32) -> f64 {
    let kf = k as f64;
    let k1 = kf + 1.0;
    -2.0 * kf * k1 / (2.0 * kf.powf(1.5) + 2.0 * k1.powf(1.5))
}

/// Rayleigh quotient `(L_V u, u) / ‖u‖²` of the indicator of rows `k` and
/// `k + 1` for the triangular potential, evaluated by brute force.
pub fn two_row_rayleigh(k: u32) -> Result<f64> {
    two_row_rayleigh_on(&TriangularGraph::infinite(), k)
}

/// [`two_row_rayleigh`] on any graph using the triangular vertex labels.
pub fn two_row_rayleigh_on<G: WeightedGraph + ?Sized>(g: &G, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain("row index must be at least 1"));
    }
    let v = Potential::new(triangular_potential_fn());
    let u = CcFunction::indicator(TriangularGraph::rows_range(k, k + 1));
    let lu = apply_to(g, &v, &u)?;
    let num = inner_product(g, &lu, &u)?;
    let den = inner_product(g, &u, &u)?;
    Ok(num.re / den.re)
}

fn one() -> f64 {
    1.0
}

fn zero() -> f64 {
    0.0
}

/// Parameters of a built-in family, as read from generator-spec JSON such
/// as `{"family":"triangular","rows":100}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilySpec {
    Triangular {
        #[serde(default)]
        rows: Option<u32>,
    },
    Path {
        n: u64,
        #[serde(default = "one")]
        b: f64,
        #[serde(default = "one")]
        mu: f64,
    },
    Star {
        leaves: u64,
        #[serde(default = "one")]
        b: f64,
        #[serde(default = "one")]
        mu: f64,
    },
    Complete {
        n: u64,
        #[serde(default = "one")]
        b: f64,
        #[serde(default = "one")]
        mu: f64,
    },
    /// Chain `0 - 1 - 2 - ...` with `b(k, k+1) = birth (k+1)^birth_exp` and
    /// `μ(k) = mu (k+1)^mu_exp`; infinite when `n` is absent.
    BirthDeath {
        #[serde(default)]
        n: Option<u64>,
        #[serde(default = "one")]
        birth: f64,
        #[serde(default = "zero")]
        birth_exp: f64,
        #[serde(default = "one")]
        mu: f64,
        #[serde(default = "zero")]
        mu_exp: f64,
    },
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Triangular { .. } => "triangular",
            FamilySpec::Path { .. } => "path",
            FamilySpec::Star { .. } => "star",
            FamilySpec::Complete { .. } => "complete",
            FamilySpec::BirthDeath { .. } => "birth-death",
        }
    }
}

/// Chain graph on `0..n` (or all of ℕ).
#[derive(Debug, Clone, PartialEq)]
pub struct ChainGraph {
    pub n: Option<u64>,
    pub birth: f64,
    pub birth_exp: f64,
    pub mu: f64,
    pub mu_exp: f64,
}

impl ChainGraph {
    fn index(&self, x: &VertexId) -> Result<u64> {
        match *x {
            VertexId::Index(i) if self.n.is_none_or(|n| i < n) => Ok(i),
            _ => Err(Error::UnknownVertex(x.clone())),
        }
    }

    /// `b(k, k + 1)`.
    pub fn bond(&self, k: u64) -> f64 {
        self.birth * ((k + 1) as f64).powf(self.birth_exp)
    }
}

impl WeightedGraph for ChainGraph {
    fn describe(&self) -> String {
        match self.n {
            Some(n) => format!("chain graph ({n} vertices)"),
            None => "chain graph (infinite)".into(),
        }
    }

    fn contains(&self, x: &VertexId) -> bool {
        self.index(x).is_ok()
    }

    fn mu(&self, x: &VertexId) -> Result<f64> {
        let i = self.index(x)?;
        Ok(self.mu * ((i + 1) as f64).powf(self.mu_exp))
    }

    fn for_each_neighbor(&self, x: &VertexId, visit: &mut dyn FnMut(&VertexId, f64)) -> Result<()> {
        let i = self.index(x)?;
        if i > 0 {
            visit(&VertexId::Index(i - 1), self.bond(i - 1));
        }
        if self.n.is_none_or(|n| i + 1 < n) {
            visit(&VertexId::Index(i + 1), self.bond(i));
        }
        Ok(())
    }

    fn edge_weight(&self, x: &VertexId, y: &VertexId) -> Result<f64> {
        let i = self.index(x)?;
        match self.index(y) {
            Ok(j) if j == i + 1 => Ok(self.bond(i)),
            Ok(j) if j + 1 == i => Ok(self.bond(j)),
            _ => Ok(0.0),
        }
    }

    fn vertices(&self) -> Option<Vec<VertexId>> {
        self.n.map(|n| (0..n).map(VertexId::Index).collect())
    }
}

/// A graph produced by [`build_family`].
#[derive(Debug, Clone)]
pub enum FamilyGraph {
    Triangular(TriangularGraph),
    Chain(ChainGraph),
    Finite(FiniteGraph),
}

impl FamilyGraph {
    pub fn as_triangular(&self) -> Option<&TriangularGraph> {
        match self {
            FamilyGraph::Triangular(t) => Some(t),
            _ => None,
        }
    }

    fn inner(&self) -> &dyn WeightedGraph {
        match self {
            FamilyGraph::Triangular(g) => g,
            FamilyGraph::Chain(g) => g,
            FamilyGraph::Finite(g) => g,
        }
    }
}

impl WeightedGraph for FamilyGraph {
    fn describe(&self) -> String {
        self.inner().describe()
    }
    fn contains(&self, x: &VertexId) -> bool {
        self.inner().contains(x)
    }
    fn mu(&self, x: &VertexId) -> Result<f64> {
        self.inner().mu(x)
    }
    fn for_each_neighbor(&self, x: &VertexId, visit: &mut dyn FnMut(&VertexId, f64)) -> Result<()> {
        self.inner().for_each_neighbor(x, visit)
    }
    fn edge_weight(&self, x: &VertexId, y: &VertexId) -> Result<f64> {
        self.inner().edge_weight(x, y)
    }
    fn vertices(&self) -> Option<Vec<VertexId>> {
        self.inner().vertices()
    }
    fn row(&self, k: u32) -> Option<Vec<VertexId>> {
        self.inner().row(k)
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::config(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Builds a (locally finite) family graph from its spec.
pub fn build_family(spec: &FamilySpec) -> Result<FamilyGraph> {
    match *spec {
        FamilySpec::Triangular { rows } => {
            if rows == Some(0) {
                return Err(Error::config("triangular graph needs at least one row"));
            }
            Ok(FamilyGraph::Triangular(TriangularGraph { rows }))
        }
        FamilySpec::Path { n, b, mu } => {
            if n == 0 {
                return Err(Error::config("path needs at least one vertex"));
            }
            positive("b", b)?;
            positive("mu", mu)?;
            Ok(FamilyGraph::Chain(ChainGraph { n: Some(n), birth: b, birth_exp: 0.0, mu, mu_exp: 0.0 }))
        }
        FamilySpec::BirthDeath { n, birth, birth_exp, mu, mu_exp } => {
            if n == Some(0) {
                return Err(Error::config("birth-death chain needs at least one vertex"));
            }
            positive("birth", birth)?;
            positive("mu", mu)?;
            if !birth_exp.is_finite() || !mu_exp.is_finite() {
                return Err(Error::config("exponents must be finite"));
            }
            Ok(FamilyGraph::Chain(ChainGraph { n, birth, birth_exp, mu, mu_exp }))
        }
        FamilySpec::Star { leaves, b, mu } => {
            positive("b", b)?;
            positive("mu", mu)?;
            let vs = (0..=leaves).map(|i| (VertexId::Index(i), mu)).collect();
            let es = (1..=leaves).map(|i| (VertexId::Index(0), VertexId::Index(i), b)).collect();
            Ok(FamilyGraph::Finite(FiniteGraph::new(vs, es)?))
        }
        FamilySpec::Complete { n, b, mu } => {
            if n == 0 {
                return Err(Error::config("complete graph needs at least one vertex"));
            }
            positive("b", b)?;
            positive("mu", mu)?;
            let vs = (0..n).map(|i| (VertexId::Index(i), mu)).collect();
            let es = (0..n).flat_map(|i| (i + 1..n).map(move |j| (VertexId::Index(i), VertexId::Index(j), b))).collect();
            Ok(FamilyGraph::Finite(FiniteGraph::new(vs, es)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{neighbors, weighted_degree};

    #[test]
    fn triangular_small_truncation_counts() {
        let g = build_family(&FamilySpec::Triangular { rows: Some(3) }).unwrap();
        let vs = g.vertices().unwrap();
        assert_eq!(vs.len(), 6);
        let fin = FiniteGraph::induced(&g, &vs).unwrap();
        assert_eq!(fin.edge_count(), 8);
        assert_eq!(TriangularGraph::edge_count(3), 8);
    }

    #[test]
    fn triangular_neighbors() {
        let g = TriangularGraph::infinite();
        assert_eq!(
            neighbors(&g, &VertexId::Cell(1, 1)).unwrap(),
            vec![(VertexId::Cell(2, 1), 1.0), (VertexId::Cell(2, 2), 1.0)]
        );
        let n = neighbors(&g, &VertexId::Cell(3, 2)).unwrap();
        assert_eq!(n.len(), 6);
        assert_eq!(n.iter().filter(|(y, _)| y.row() == Some(2)).count(), 2);
        assert_eq!(n.iter().filter(|(y, _)| y.row() == Some(4)).count(), 4);
        assert!(!g.contains(&VertexId::Cell(3, 4)));
        assert!(!g.contains(&VertexId::Cell(0, 0)));
    }

    #[test]
    fn triangular_degree_matches_closed_form() {
        let g = TriangularGraph::infinite();
        for k in [1u32, 2, 5, 37, 400] {
            for j in [1, k] {
                let d = weighted_degree(&g, &VertexId::Cell(k, j)).unwrap();
                assert!((d - TriangularGraph::deg_closed_form(k)).abs() <= 1e-12 * d);
                assert_eq!(neighbors(&g, &VertexId::Cell(k, j)).unwrap().len() as u64, TriangularGraph::degree_count_closed_form(k));
            }
        }
    }

    #[test]
    fn potential_and_rho_values() {
        assert_eq!(triangular_potential(1), -1.0);
        assert_eq!(triangular_potential(4), -2.0);
        assert_eq!(triangular_potential(9), -3.0);
        assert_eq!(triangular_rho_closed_form(1), 0.0);
        assert_eq!(triangular_rho_closed_form(2), 2f64.powf(-0.25));
        let table = triangular_rho_table(50);
        for k in 1..=50 {
            assert_eq!(table[k as usize], triangular_rho_closed_form(k));
        }
    }

    #[test]
    fn rayleigh_small_row() {
        let brute = two_row_rayleigh(1).unwrap();
        let closed = two_row_rayleigh_closed_form(1);
        assert!((brute - closed).abs() < 1e-12);
        assert!((closed + 4.0 / (2.0 + 2.0 * 2f64.powf(1.5))).abs() < 1e-15);
        assert!((closed + 0.5224).abs() < 1e-4);
    }

    #[test]
    fn single_vertex_rayleigh_is_zero_on_triangular() {
        let g = TriangularGraph::infinite();
        let v = Potential::new(triangular_potential_fn());
        for k in [1u32, 3, 10] {
            let u = CcFunction::delta(VertexId::Cell(k, 1));
            let lu = apply_to(&g, &v, &u).unwrap();
            let q = inner_product(&g, &lu, &u).unwrap().re / inner_product(&g, &u, &u).unwrap().re;
            assert!(q.abs() < 1e-12, "k={k}: {q}");
        }
    }

    #[test]
    fn stock_families() {
        let p1 = build_family(&FamilySpec::Path { n: 1, b: 1.0, mu: 1.0 }).unwrap();
        assert_eq!(p1.vertices().unwrap().len(), 1);
        assert!(neighbors(&p1, &VertexId::Index(0)).unwrap().is_empty());
        let star = build_family(&FamilySpec::Star { leaves: 5, b: 1.0, mu: 1.0 }).unwrap();
        assert_eq!(weighted_degree(&star, &VertexId::Index(0)).unwrap(), 5.0);
        let k4 = build_family(&FamilySpec::Complete { n: 4, b: 2.0, mu: 1.0 }).unwrap();
        assert_eq!(weighted_degree(&k4, &VertexId::Index(2)).unwrap(), 6.0);
        let bd = build_family(&FamilySpec::BirthDeath { n: None, birth: 1.0, birth_exp: 1.0, mu: 1.0, mu_exp: 0.0 }).unwrap();
        assert_eq!(weighted_degree(&bd, &VertexId::Index(3)).unwrap(), 3.0 + 4.0);
        assert!(build_family(&FamilySpec::Path { n: 0, b: 1.0, mu: 1.0 }).is_err());
        assert!(build_family(&FamilySpec::Complete { n: 3, b: -1.0, mu: 1.0 }).is_err());
    }

    #[test]
    fn family_spec_json() {
        let spec: FamilySpec = serde_json::from_str(r#"{"family":"triangular","rows":100}"#).unwrap();
        assert_eq!(spec, FamilySpec::Triangular { rows: Some(100) });
        let spec: FamilySpec = serde_json::from_str(r#"{"family":"path","n":4}"#).unwrap();
        assert_eq!(spec, FamilySpec::Path { n: 4, b: 1.0, mu: 1.0 });
        assert!(serde_json::from_str::<FamilySpec>(r#"{"family":"torus"}"#).is_err());
    }

    #[test]
    fn generator_is_deterministic() {
        let g = TriangularGraph::infinite();
        let stream = || -> Vec<(VertexId, f64)> {
            TriangularGraph::rows_range(1, 12).iter().flat_map(|x| neighbors(&g, x).unwrap()).collect()
        };
        assert_eq!(stream(), stream());
    }
}
