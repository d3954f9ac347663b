use std::collections::BTreeMap;
use std::path::Path;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::{VertexId, WeightedGraph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: VertexId,
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub u: VertexId,
    pub v: VertexId,
    pub b: f64,
}

/// On-disk graph format: every undirected edge listed once.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
}

impl GraphDoc {
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Explicit finite graph with sorted adjacency lists.
#[derive(Debug, Clone)]
pub struct FiniteGraph {
    ids: Vec<VertexId>,
    index: FxHashMap<VertexId, usize>,
    mu: Vec<f64>,
    adj: Vec<Vec<(VertexId, f64)>>,
}

impl FiniteGraph {
    /// Builds a graph from undirected edges, rejecting self-loops,
    /// nonpositive weights and conflicting duplicate listings.
    pub fn new(vertices: Vec<(VertexId, f64)>, edges: Vec<(VertexId, VertexId, f64)>) -> Result<Self> {
        let g = Self::build(vertices, edges)?;
        g.verify_symmetric()?;
        Ok(g)
    }

    pub fn from_doc(doc: &GraphDoc) -> Result<Self> {
        let g = Self::from_doc_unchecked(doc)?;
        g.verify_symmetric()?;
        Ok(g)
    }

    /// Keeps a listing of both orientations with different weights as an
    /// asymmetric graph so the axiom checks can report it.
    pub fn from_doc_unchecked(doc: &GraphDoc) -> Result<Self> {
        Self::build(
            doc.vertices.iter().map(|v| (v.id.clone(), v.mu)).collect(),
            doc.edges.iter().map(|e| (e.u.clone(), e.v.clone(), e.b)).collect(),
        )
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_doc(&GraphDoc::read(path)?)
    }

    fn build(vertices: Vec<(VertexId, f64)>, edges: Vec<(VertexId, VertexId, f64)>) -> Result<Self> {
        let mut sorted: BTreeMap<VertexId, f64> = BTreeMap::new();
        for (id, mu) in vertices {
            if !(mu.is_finite() && mu > 0.0) {
                return Err(Error::config(format!("vertex {id}: weight mu must be positive and finite, got {mu}")));
            }
            if sorted.insert(id.clone(), mu).is_some() {
                return Err(Error::config(format!("duplicate vertex {id}")));
            }
        }
        let ids: Vec<VertexId> = sorted.keys().cloned().collect();
        let mu: Vec<f64> = sorted.values().copied().collect();
        let index: FxHashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();

        // explicit[(u, v)] is the weight listed in orientation u -> v
        let mut explicit: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (u, v, b) in edges {
            let iu = *index.get(&u).ok_or_else(|| Error::config(format!("edge refers to unknown vertex {u}")))?;
            let iv = *index.get(&v).ok_or_else(|| Error::config(format!("edge refers to unknown vertex {v}")))?;
            if iu == iv {
                return Err(Error::config(format!("self-loop at {u}")));
            }
            if !(b.is_finite() && b > 0.0) {
                return Err(Error::config(format!("edge {u}-{v}: weight must be positive and finite, got {b}")));
            }
            if let Some(prev) = explicit.insert((iu, iv), b) {
                if prev != b {
                    return Err(Error::config(format!("edge {u}-{v} listed twice with weights {prev} and {b}")));
                }
            }
        }
        let mut directed = explicit.clone();
        for (&(iu, iv), &b) in &explicit {
            directed.entry((iv, iu)).or_insert(b);
        }
        let mut adj: Vec<Vec<(VertexId, f64)>> = vec![Vec::new(); ids.len()];
        // BTreeMap order gives each list sorted by target index, which is VertexId order
        for ((iu, iv), b) in directed {
            adj[iu].push((ids[iv].clone(), b));
        }
        Ok(FiniteGraph { ids, index, mu, adj })
    }

    fn verify_symmetric(&self) -> Result<()> {
        for (i, list) in self.adj.iter().enumerate() {
            for (y, b) in list {
                let back = self.edge_weight(y, &self.ids[i])?;
                if back.to_bits() != b.to_bits() {
                    return Err(Error::config(format!(
                        "asymmetric edge weights: b({},{y}) = {b}, b({y},{}) = {back}",
                        self.ids[i], self.ids[i]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Induced subgraph of `g` on `vertices`.
    pub fn induced<G: WeightedGraph + ?Sized>(g: &G, vertices: &[VertexId]) -> Result<Self> {
        let keep: FxHashMap<&VertexId, ()> = vertices.iter().map(|v| (v, ())).collect();
        let mut vs = Vec::with_capacity(vertices.len());
        let mut es = Vec::new();
        for x in vertices {
            vs.push((x.clone(), g.mu(x)?));
            g.for_each_neighbor(x, &mut |y, b| {
                if x < y && keep.contains_key(y) {
                    es.push((x.clone(), y.clone(), b));
                }
            })?;
        }
        Self::new(vs, es)
    }

    pub fn to_doc(&self) -> GraphDoc {
        let vertices = self.ids.iter().zip(&self.mu).map(|(id, &mu)| VertexRecord { id: id.clone(), mu }).collect();
        let mut edges = Vec::new();
        for (i, list) in self.adj.iter().enumerate() {
            for (y, b) in list {
                if &self.ids[i] < y {
                    edges.push(EdgeRecord { u: self.ids[i].clone(), v: y.clone(), b: *b });
                }
            }
        }
        GraphDoc { vertices, edges }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    fn idx(&self, x: &VertexId) -> Result<usize> {
        self.index.get(x).copied().ok_or_else(|| Error::UnknownVertex(x.clone()))
    }
}

impl WeightedGraph for FiniteGraph {
    fn describe(&self) -> String {
        format!("finite graph ({} vertices, {} edges)", self.len(), self.edge_count())
    }

    fn contains(&self, x: &VertexId) -> bool {
        self.index.contains_key(x)
    }

    fn mu(&self, x: &VertexId) -> Result<f64> {
        Ok(self.mu[self.idx(x)?])
    }

    fn for_each_neighbor(&self, x: &VertexId, visit: &mut dyn FnMut(&VertexId, f64)) -> Result<()> {
        for (y, b) in &self.adj[self.idx(x)?] {
            visit(y, *b);
        }
        Ok(())
    }

    fn edge_weight(&self, x: &VertexId, y: &VertexId) -> Result<f64> {
        let list = &self.adj[self.idx(x)?];
        Ok(list.binary_search_by(|(z, _)| z.cmp(y)).map(|i| list[i].1).unwrap_or(0.0))
    }

    fn vertices(&self) -> Option<Vec<VertexId>> {
        Some(self.ids.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loader_rejects_bad_input() {
        let v = |s: &str| VertexId::label(s);
        assert!(FiniteGraph::new(vec![(v("a"), 0.0)], vec![]).is_err());
        assert!(FiniteGraph::new(vec![(v("a"), 1.0)], vec![(v("a"), v("a"), 1.0)]).is_err());
        assert!(FiniteGraph::new(vec![(v("a"), 1.0), (v("b"), 1.0)], vec![(v("a"), v("b"), -1.0)]).is_err());
        assert!(FiniteGraph::new(vec![(v("a"), 1.0)], vec![(v("a"), v("c"), 1.0)]).is_err());
    }

    #[test]
    fn doc_round_trip_is_identity() {
        let v = |s: &str| VertexId::label(s);
        let g = FiniteGraph::new(
            vec![(v("a"), 1.0), (v("b"), 2.0), (v("c"), 0.5)],
            vec![(v("a"), v("b"), 1.5), (v("c"), v("b"), 0.25)],
        )
        .unwrap();
        let doc = g.to_doc();
        let json = serde_json::to_string(&doc).unwrap();
        let back = FiniteGraph::from_doc(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.to_doc(), doc);
        assert_eq!(back.edge_weight(&v("b"), &v("c")).unwrap(), 0.25);
        assert_eq!(back.edge_weight(&v("a"), &v("c")).unwrap(), 0.0);
    }
}
