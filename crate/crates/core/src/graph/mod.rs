//! Weighted graphs `(X, b, μ)`: finite graphs loaded from JSON and lazily
//! generated infinite families behind one trait.

mod finite;
mod vertex;
mod vertex_map;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

pub use finite::{EdgeRecord, FiniteGraph, GraphDoc, VertexRecord};
pub use vertex::VertexId;
pub use vertex_map::{VertexMap, VertexSet};

use crate::certificate::{Certificate, Witness};
use crate::error::{Error, Result};
use crate::metrics::PathMetric;
use crate::numeric::KahanSum;

/// Analytic sums over the neighbors of a vertex that `for_each_neighbor`
/// does not visit. Only meaningful for vertices that are not locally finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeighborTail {
    /// `Σ b(x,y)` over the unvisited neighbors.
    pub weight_sum: f64,
    /// `Σ b(x,y)² / μ(y)` over the unvisited neighbors.
    pub weight_sq_over_mu: f64,
}

/// Read-only access to a weighted graph.
///
/// Implementations must visit neighbors in ascending [`VertexId`] order and
/// must never report `x` as its own neighbor unless they intend the axiom
/// checks to flag it.
pub trait WeightedGraph: Send + Sync {
    fn describe(&self) -> String;

    fn contains(&self, x: &VertexId) -> bool;

    fn mu(&self, x: &VertexId) -> Result<f64>;

    fn for_each_neighbor(&self, x: &VertexId, visit: &mut dyn FnMut(&VertexId, f64)) -> Result<()>;

    fn is_locally_finite_at(&self, _x: &VertexId) -> bool {
        true
    }

    fn tail(&self, _x: &VertexId) -> Option<NeighborTail> {
        None
    }

    /// `b(x, y)`, zero when the vertices are not adjacent.
    fn edge_weight(&self, x: &VertexId, y: &VertexId) -> Result<f64> {
        let mut found = 0.0;
        self.for_each_neighbor(x, &mut |z, b| {
            if z == y {
                found = b;
            }
        })?;
        Ok(found)
    }

    /// All vertices, for finite graphs.
    fn vertices(&self) -> Option<Vec<VertexId>> {
        None
    }

    /// Vertices of row `k`, for row-structured families.
    fn row(&self, _k: u32) -> Option<Vec<VertexId>> {
        None
    }
}

impl<G: WeightedGraph + ?Sized> WeightedGraph for &G {
    fn describe(&self) -> String {
        (**self).describe()
    }
    fn contains(&self, x: &VertexId) -> bool {
        (**self).contains(x)
    }
    fn mu(&self, x: &VertexId) -> Result<f64> {
        (**self).mu(x)
    }
    fn for_each_neighbor(&self, x: &VertexId, visit: &mut dyn FnMut(&VertexId, f64)) -> Result<()> {
        (**self).for_each_neighbor(x, visit)
    }
    fn is_locally_finite_at(&self, x: &VertexId) -> bool {
        (**self).is_locally_finite_at(x)
    }
    fn tail(&self, x: &VertexId) -> Option<NeighborTail> {
        (**self).tail(x)
    }
    fn edge_weight(&self, x: &VertexId, y: &VertexId) -> Result<f64> {
        (**self).edge_weight(x, y)
    }
    fn vertices(&self) -> Option<Vec<VertexId>> {
        (**self).vertices()
    }
    fn row(&self, k: u32) -> Option<Vec<VertexId>> {
        (**self).row(k)
    }
}

impl<G: WeightedGraph + ?Sized> WeightedGraph for Box<G> {
    fn describe(&self) -> String {
        (**self).describe()
    }
    fn contains(&self, x: &VertexId) -> bool {
        (**self).contains(x)
    }
    fn mu(&self, x: &VertexId) -> Result<f64> {
        (**self).mu(x)
    }
    fn for_each_neighbor(&self, x: &VertexId, visit: &mut dyn FnMut(&VertexId, f64)) -> Result<()> {
        (**self).for_each_neighbor(x, visit)
    }
    fn is_locally_finite_at(&self, x: &VertexId) -> bool {
        (**self).is_locally_finite_at(x)
    }
    fn tail(&self, x: &VertexId) -> Option<NeighborTail> {
        (**self).tail(x)
    }
    fn edge_weight(&self, x: &VertexId, y: &VertexId) -> Result<f64> {
        (**self).edge_weight(x, y)
    }
    fn vertices(&self) -> Option<Vec<VertexId>> {
        (**self).vertices()
    }
    fn row(&self, k: u32) -> Option<Vec<VertexId>> {
        (**self).row(k)
    }
}

/// All `y` with `b(x, y) > 0`, in ascending order.
pub fn neighbors<G: WeightedGraph + ?Sized>(g: &G, x: &VertexId) -> Result<Vec<(VertexId, f64)>> {
    if !g.contains(x) {
        return Err(Error::UnknownVertex(x.clone()));
    }
    let mut out = Vec::new();
    g.for_each_neighbor(x, &mut |y, b| out.push((y.clone(), b)))?;
    if !out.is_sorted_by(|a, b| a.0 <= b.0) {
        out.sort_by(|a, b| a.0.cmp(&b.0));
    }
    Ok(out)
}

/// The tail of a vertex that is not locally finite, or an inconclusive error
/// when the graph cannot bound it.
pub(crate) fn require_tail<G: WeightedGraph + ?Sized>(g: &G, x: &VertexId) -> Result<Option<NeighborTail>> {
    if g.is_locally_finite_at(x) {
        return Ok(None);
    }
    match g.tail(x) {
        Some(t) => Ok(Some(t)),
        None => Err(Error::inconclusive(format!(
            "vertex {x} is not locally finite and the graph supplies no tail data"
        ))),
    }
}

/// `Σ_y b(x, y)`, compensated, including analytic tail data.
pub fn weight_sum<G: WeightedGraph + ?Sized>(g: &G, x: &VertexId) -> Result<f64> {
    if !g.contains(x) {
        return Err(Error::UnknownVertex(x.clone()));
    }
    let tail = require_tail(g, x)?;
    let mut acc = KahanSum::new();
    g.for_each_neighbor(x, &mut |_, b| acc.add(b))?;
    if let Some(t) = tail {
        acc.add(t.weight_sum);
    }
    Ok(acc.value())
}

/// `Deg(x) = (1/μ(x)) Σ_y b(x, y)`.
pub fn weighted_degree<G: WeightedGraph + ?Sized>(g: &G, x: &VertexId) -> Result<f64> {
    let sum = weight_sum(g, x)?;
    Ok(sum / g.mu(x)?)
}

/// Checks symmetry, zero diagonal and finite weight sums on `scope`.
pub fn check_edge_axioms<G: WeightedGraph + ?Sized>(g: &G, scope: &[VertexId], scope_name: &str) -> Certificate {
    let mut cert = Certificate::new("edge axioms (symmetry, zero diagonal, finite sums)", scope_name);
    for x in scope {
        let nbrs = match neighbors(g, x) {
            Ok(n) => n,
            Err(e) => {
                cert.mark_inconclusive(e.to_string());
                continue;
            }
        };
        for (y, b) in &nbrs {
            if y == x {
                cert.fail(Witness::new(vec![x.to_string()], *b, "b(x,x) != 0"));
                continue;
            }
            if !(b.is_finite() && *b > 0.0) {
                cert.fail(Witness::new(vec![x.to_string(), y.to_string()], *b, "edge weight not positive and finite"));
            }
            match g.edge_weight(y, x) {
                Ok(back) if back.to_bits() == b.to_bits() => {}
                Ok(back) => cert.fail(Witness::new(
                    vec![x.to_string(), y.to_string()],
                    back - b,
                    format!("b(x,y) = {b} but b(y,x) = {back}"),
                )),
                Err(e) => cert.mark_inconclusive(e.to_string()),
            }
        }
        match weight_sum(g, x) {
            Ok(s) if s.is_finite() => {}
            Ok(s) => cert.fail(Witness::new(vec![x.to_string()], s, "weight sum not finite")),
            Err(e) => cert.mark_inconclusive(e.to_string()),
        }
    }
    cert
}

/// True iff `scope` is connected in the subgraph it induces.
pub fn is_connected<G: WeightedGraph + ?Sized>(g: &G, scope: &[VertexId]) -> Result<bool> {
    let Some(start) = scope.first() else {
        return Ok(true);
    };
    let members: VertexSet = scope.iter().collect();
    let mut seen = VertexSet::new();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(x) = queue.pop_front() {
        let mut next = Vec::new();
        g.for_each_neighbor(&x, &mut |y, _| {
            if members.contains(y) && !seen.contains(y) {
                next.push(y.clone());
            }
        })?;
        for y in next {
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    Ok(seen.len() == members.len())
}

/// Neighbors of `set` outside `set`, sorted and deduplicated.
pub fn shell<G: WeightedGraph + ?Sized>(g: &G, set: &[VertexId]) -> Result<Vec<VertexId>> {
    let members: VertexSet = set.iter().collect();
    let parts = crate::exec::try_map(set, |x| {
        let mut out = Vec::new();
        g.for_each_neighbor(x, &mut |y, _| {
            if !members.contains(y) {
                out.push(y.clone());
            }
        })?;
        Ok::<_, Error>(out)
    })?;
    let mut all: Vec<VertexId> = parts.into_iter().flatten().collect();
    all.sort_unstable();
    all.dedup();
    Ok(all)
}

/// Metric ball `B(o, r)` as far as a budgeted search could enumerate it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: VertexId,
    pub radius: f64,
    /// Members with their distance from the center, in settle order.
    pub members: Vec<(VertexId, f64)>,
    /// True iff no vertex outside `members` can lie in the ball.
    pub exhausted: bool,
}

impl Ball {
    pub fn vertices(&self) -> Vec<VertexId> {
        self.members.iter().map(|(v, _)| v.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Enumerates `B(o, r)` for `metric` with at most `budget` settled vertices.
pub fn ball_enumerate<G: WeightedGraph + ?Sized>(metric: &PathMetric<'_, G>, o: &VertexId, r: f64, budget: usize) -> Result<Ball> {
    metric.ball(o, r, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> FiniteGraph {
        let doc: GraphDoc = serde_json::from_str(
            r#"{"vertices":[{"id":"a","mu":2.0},{"id":"b","mu":2.0},{"id":"c","mu":2.0}],
                "edges":[{"u":"a","v":"b","b":1.0},{"u":"b","v":"c","b":1.0}]}"#,
        )
        .unwrap();
        FiniteGraph::from_doc(&doc).unwrap()
    }

    #[test]
    fn degree_of_path_middle() {
        let g = path3();
        assert_eq!(weighted_degree(&g, &VertexId::label("b")).unwrap(), 1.0);
        assert_eq!(weighted_degree(&g, &VertexId::label("a")).unwrap(), 0.5);
    }

    #[test]
    fn unknown_vertex_is_domain_error() {
        let g = path3();
        assert!(matches!(neighbors(&g, &VertexId::label("zz")), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn isolated_vertex() {
        let doc: GraphDoc = serde_json::from_str(r#"{"vertices":[{"id":"o","mu":3.5}],"edges":[]}"#).unwrap();
        let g = FiniteGraph::from_doc(&doc).unwrap();
        let o = VertexId::label("o");
        assert!(neighbors(&g, &o).unwrap().is_empty());
        assert_eq!(weighted_degree(&g, &o).unwrap(), 0.0);
        assert!(is_connected(&g, &[o]).unwrap());
    }

    #[test]
    fn disjoint_edges_are_disconnected() {
        let doc: GraphDoc = serde_json::from_str(
            r#"{"vertices":[{"id":"a","mu":1},{"id":"b","mu":1},{"id":"c","mu":1},{"id":"d","mu":1}],
                "edges":[{"u":"a","v":"b","b":1},{"u":"c","v":"d","b":1}]}"#,
        )
        .unwrap();
        let g = FiniteGraph::from_doc(&doc).unwrap();
        let all = g.vertices().unwrap();
        assert!(!is_connected(&g, &all).unwrap());
        assert!(is_connected(&g, &all[..2]).unwrap());
    }

    #[test]
    fn asymmetric_listing_is_reported() {
        let doc: GraphDoc = serde_json::from_str(
            r#"{"vertices":[{"id":"x","mu":1},{"id":"y","mu":1}],
                "edges":[{"u":"x","v":"y","b":1},{"u":"y","v":"x","b":2}]}"#,
        )
        .unwrap();
        assert!(FiniteGraph::from_doc(&doc).is_err());
        let g = FiniteGraph::from_doc_unchecked(&doc).unwrap();
        let cert = check_edge_axioms(&g, &g.vertices().unwrap(), "all");
        assert_eq!(cert.verdict, crate::Verdict::Fail);
        let w = &cert.witnesses[0];
        assert_eq!(w.vertices, vec!["x".to_string(), "y".to_string()]);
    }

    #[test]
    fn valid_graph_passes_axioms() {
        let g = path3();
        let cert = check_edge_axioms(&g, &g.vertices().unwrap(), "all");
        assert!(cert.is_pass(), "{cert}");
    }
}
