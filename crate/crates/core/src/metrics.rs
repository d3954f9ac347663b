//! Path pseudo metrics induced by edge lengths, computed by budgeted Dijkstra
//! searches that state explicitly whether their answers are exact.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::sync::{Arc, Mutex};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Slack, Witness};
use crate::error::{Error, Result};
use crate::exec;
use crate::graph::{require_tail, weighted_degree, Ball, VertexId, VertexMap, VertexSet, WeightedGraph};
use crate::numeric::KahanSum;

pub type DistanceMap = VertexMap<f64>;

/// The degree-path metric meets `Σ b ρ² <= μ` with equality wherever `x` has
/// the largest degree among its neighbors, so the check allows rounding.
pub const INTRINSIC_REL_TOL: f64 = 1e-12;

type CustomLength = Arc<dyn Fn(&VertexId, &VertexId, f64) -> f64 + Send + Sync>;

/// Edge length `σ(x, y)` defining a path pseudo metric.
#[derive(Clone)]
pub enum EdgeLength {
    /// `min{Deg(x)^{-1/2}, Deg(y)^{-1/2}}`.
    DegreePath,
    /// The same length on every edge.
    Constant(f64),
    /// Another length multiplied by a nonnegative factor.
    Scaled(Box<EdgeLength>, f64),
    /// Arbitrary symmetric rule `(x, y, b(x,y)) -> σ`.
    Custom(String, CustomLength),
}

impl fmt::Debug for EdgeLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl EdgeLength {
    pub fn scaled(self, factor: f64) -> Self {
        EdgeLength::Scaled(Box::new(self), factor)
    }

    pub fn custom(name: impl Into<String>, f: impl Fn(&VertexId, &VertexId, f64) -> f64 + Send + Sync + 'static) -> Self {
        EdgeLength::Custom(name.into(), Arc::new(f))
    }

    pub fn name(&self) -> String {
        match self {
            EdgeLength::DegreePath => "degree-path".into(),
            EdgeLength::Constant(c) => format!("constant({c})"),
            EdgeLength::Scaled(inner, s) => format!("{} x {s}", inner.name()),
            EdgeLength::Custom(name, _) => name.clone(),
        }
    }

    pub fn needs_degrees(&self) -> bool {
        match self {
            EdgeLength::DegreePath => true,
            EdgeLength::Scaled(inner, _) => inner.needs_degrees(),
            _ => false,
        }
    }

    /// Length of the edge `x ~ y` with weight `b`, given both weighted degrees
    /// (ignored unless [`Self::needs_degrees`]).
    pub fn length(&self, x: &VertexId, y: &VertexId, b: f64, deg_x: f64, deg_y: f64) -> Result<f64> {
        match self {
            EdgeLength::DegreePath => {
                if deg_x <= 0.0 || deg_y <= 0.0 {
                    return Err(Error::domain(format!("degree-path length undefined on {x}~{y}: zero weighted degree")));
                }
                Ok(deg_x.sqrt().recip().min(deg_y.sqrt().recip()))
            }
            EdgeLength::Constant(c) => Ok(*c),
            EdgeLength::Scaled(inner, s) => Ok(inner.length(x, y, b, deg_x, deg_y)? * s),
            EdgeLength::Custom(_, f) => Ok(f(x, y, b)),
        }
    }
}

/// `σ(x, y) = min{Deg(x)^{-1/2}, Deg(y)^{-1/2}}` for adjacent `x, y`.
pub fn degree_path_sigma<G: WeightedGraph + ?Sized>(g: &G, x: &VertexId, y: &VertexId) -> Result<f64> {
    let b = g.edge_weight(x, y)?;
    if b <= 0.0 {
        return Err(Error::domain(format!("{x} and {y} are not adjacent")));
    }
    EdgeLength::DegreePath.length(x, y, b, weighted_degree(g, x)?, weighted_degree(g, y)?)
}

/// Outcome of a distance query.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rho {
    /// Exact value when `exact`, otherwise the best upper bound found
    /// (`+∞`, serialized as `null`, when no path was found).
    pub rho: f64,
    pub exact: bool,
}

/// Jump size `s = sup{ρ(x, y) : x ~ y}` over an enumerated edge set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpSize {
    pub s: f64,
    /// Largest value seen on the enumerated edges.
    pub enumerated_sup: f64,
    pub edges: usize,
    pub scope: String,
    /// True iff an analytic bound covering every edge of the family was
    /// supplied and dominates every enumerated value.
    pub certified: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JumpMode {
    /// Use `σ(x, y) >= ρ(x, y)`; sound as an upper bound on the jump size.
    EdgeLengthBound,
    /// Compute `ρ(x, y)` per edge by a budgeted search.
    Exact { budget: usize },
}

#[derive(Debug, Clone, PartialEq)]
struct HeapItem {
    dist: f64,
    id: VertexId,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed: BinaryHeap is a max-heap; ties broken by smaller id first
        other.dist.total_cmp(&self.dist).then_with(|| other.id.cmp(&self.id))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy)]
struct NodeState {
    dist: f64,
    settled: bool,
    deg: Option<f64>,
}

/// Incremental single-source Dijkstra.
struct Search<'m, 'g, G: WeightedGraph + ?Sized> {
    metric: &'m PathMetric<'g, G>,
    nodes: VertexMap<NodeState>,
    heap: BinaryHeap<HeapItem>,
    settled: Vec<(VertexId, f64)>,
    buf: Vec<(VertexId, f64)>,
    /// Set when a settled vertex had neighbors the search could not visit.
    incomplete: Option<String>,
}

impl<'m, 'g, G: WeightedGraph + ?Sized> Search<'m, 'g, G> {
    fn new(metric: &'m PathMetric<'g, G>, source: &VertexId) -> Result<Self> {
        if !metric.graph.contains(source) {
            return Err(Error::UnknownVertex(source.clone()));
        }
        let mut nodes = VertexMap::new();
        nodes.insert(source.clone(), NodeState { dist: 0.0, settled: false, deg: None });
        let mut heap = BinaryHeap::new();
        heap.push(HeapItem { dist: 0.0, id: source.clone() });
        Ok(Search { metric, nodes, heap, settled: Vec::new(), buf: Vec::new(), incomplete: None })
    }

    /// Smallest tentative label on the frontier.
    fn peek_min(&mut self) -> Option<f64> {
        while let Some(top) = self.heap.peek() {
            let state = self.nodes[&top.id];
            if state.settled || top.dist > state.dist {
                self.heap.pop();
            } else {
                return Some(top.dist);
            }
        }
        None
    }

    fn degree(&mut self, x: &VertexId) -> Result<f64> {
        if let Some(d) = self.nodes.get(x).and_then(|s| s.deg) {
            return Ok(d);
        }
        let d = weighted_degree(self.metric.graph, x)?;
        if let Some(s) = self.nodes.get_mut(x) {
            s.deg = Some(d);
        }
        Ok(d)
    }

    fn settle_next(&mut self) -> Result<Option<(VertexId, f64)>> {
        if self.peek_min().is_none() {
            return Ok(None);
        }
        let HeapItem { dist, id } = self.heap.pop().expect("peeked");
        self.nodes.get_mut(&id).expect("queued node").settled = true;
        self.settled.push((id.clone(), dist));

        let g = self.metric.graph;
        if !g.is_locally_finite_at(&id) {
            self.incomplete = Some(format!("vertex {id} is not locally finite; paths through unvisited neighbors are not explored"));
        }
        let needs_deg = self.metric.length.needs_degrees();
        let deg_x = if needs_deg { self.degree(&id)? } else { f64::NAN };
        let mut buf = std::mem::take(&mut self.buf);
        buf.clear();
        g.for_each_neighbor(&id, &mut |y, b| buf.push((y.clone(), b)))?;
        for (y, b) in buf.drain(..) {
            let length = &self.metric.length;
            match self.nodes.get_mut(&y) {
                Some(s) if s.settled => {}
                Some(s) => {
                    let deg_y = match (needs_deg, s.deg) {
                        (false, _) => f64::NAN,
                        (true, Some(d)) => d,
                        (true, None) => {
                            let d = weighted_degree(g, &y)?;
                            s.deg = Some(d);
                            d
                        }
                    };
                    let cand = dist + length.length(&id, &y, b, deg_x, deg_y)?;
                    if cand < s.dist {
                        s.dist = cand;
                        self.heap.push(HeapItem { dist: cand, id: y });
                    }
                }
                None => {
                    let deg_y = if needs_deg { weighted_degree(g, &y)? } else { f64::NAN };
                    let cand = dist + length.length(&id, &y, b, deg_x, deg_y)?;
                    let deg = needs_deg.then_some(deg_y);
                    self.nodes.insert(y.clone(), NodeState { dist: cand, settled: false, deg });
                    self.heap.push(HeapItem { dist: cand, id: y });
                }
            }
        }
        self.buf = buf;
        Ok(Some((id, dist)))
    }
}

/// Settled distances from one source; every vertex with distance at most
/// `radius` is present.
#[derive(Debug, Clone)]
struct SettledTree {
    dist: DistanceMap,
    /// Largest settled distance; every vertex strictly closer is present.
    reach: f64,
}

/// Path pseudo metric `ρ_σ` on a graph.
pub struct PathMetric<'g, G: WeightedGraph + ?Sized> {
    graph: &'g G,
    length: EdgeLength,
    cache: Mutex<FxHashMap<VertexId, Arc<SettledTree>>>,
}

impl<'g, G: WeightedGraph + ?Sized> PathMetric<'g, G> {
    pub fn new(graph: &'g G, length: EdgeLength) -> Self {
        PathMetric { graph, length, cache: Mutex::new(FxHashMap::default()) }
    }

    pub fn degree_path(graph: &'g G) -> Self {
        Self::new(graph, EdgeLength::DegreePath)
    }

    pub fn graph(&self) -> &'g G {
        self.graph
    }

    pub fn edge_length(&self) -> &EdgeLength {
        &self.length
    }

    pub fn describe(&self) -> String {
        format!("path metric [{}] on {}", self.length.name(), self.graph.describe())
    }

    /// `σ(x, y)` for an edge, computing degrees on demand.
    pub fn sigma(&self, x: &VertexId, y: &VertexId) -> Result<f64> {
        let b = self.graph.edge_weight(x, y)?;
        if b <= 0.0 {
            return Err(Error::domain(format!("{x} and {y} are not adjacent")));
        }
        let (dx, dy) = if self.length.needs_degrees() {
            (weighted_degree(self.graph, x)?, weighted_degree(self.graph, y)?)
        } else {
            (f64::NAN, f64::NAN)
        };
        self.length.length(x, y, b, dx, dy)
    }

    fn cached(&self, source: &VertexId) -> Option<Arc<SettledTree>> {
        self.cache.lock().expect("metric cache poisoned").get(source).cloned()
    }

    fn store(&self, source: &VertexId, settled: &[(VertexId, f64)]) {
        let mut cache = self.cache.lock().expect("metric cache poisoned");
        let bigger = cache.get(source).is_none_or(|t| t.dist.len() < settled.len());
        if bigger {
            let dist = settled.iter().cloned().collect();
            let reach = settled.last().map_or(0.0, |(_, d)| *d);
            cache.insert(source.clone(), Arc::new(SettledTree { dist, reach }));
        }
    }

    /// `ρ(x, y)` with at most `budget` settled vertices.
    pub fn shortest_rho(&self, x: &VertexId, y: &VertexId, budget: usize) -> Result<Rho> {
        if !self.graph.contains(y) {
            return Err(Error::UnknownVertex(y.clone()));
        }
        if x == y {
            return Ok(Rho { rho: 0.0, exact: true });
        }
        if let Some(d) = self.cached(x).and_then(|t| t.dist.get(y).copied()) {
            return Ok(Rho { rho: d, exact: true });
        }
        let mut search = Search::new(self, x)?;
        while search.settled.len() < budget {
            match search.settle_next()? {
                Some((v, d)) if &v == y => {
                    let exact = search.incomplete.is_none();
                    if exact {
                        self.store(x, &search.settled);
                    }
                    return Ok(Rho { rho: d, exact });
                }
                Some(_) => {}
                None => break,
            }
        }
        let best = search.nodes.get(y).map_or(f64::INFINITY, |s| s.dist);
        Ok(Rho { rho: best, exact: false })
    }

    /// `B(o, r)`; see [`crate::graph::ball_enumerate`].
    pub fn ball(&self, o: &VertexId, r: f64, budget: usize) -> Result<Ball> {
        if !(r >= 0.0) {
            return Err(Error::domain(format!("ball radius must be nonnegative, got {r}")));
        }
        if let Some(tree) = self.cached(o).filter(|t| r < t.reach) {
            let mut members: Vec<(VertexId, f64)> = tree.dist.iter().filter(|(_, d)| **d <= r).map(|(v, d)| (v, *d)).collect();
            if members.len() <= budget {
                members.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
                return Ok(Ball { center: o.clone(), radius: r, members, exhausted: true });
            }
        }
        let mut search = Search::new(self, o)?;
        let exhausted = loop {
            match search.peek_min() {
                None => break true,
                Some(d) if d > r => break true,
                Some(_) if search.settled.len() >= budget => break false,
                Some(_) => {
                    search.settle_next()?;
                }
            }
        };
        let exhausted = exhausted && search.incomplete.is_none();
        if exhausted {
            self.store(o, &search.settled);
        }
        Ok(Ball { center: o.clone(), radius: r, members: search.settled, exhausted })
    }

    /// Distances from `o` to every vertex in `targets` (and to everything
    /// settled on the way). Inconclusive if the budget runs out first.
    pub fn distances_to(&self, o: &VertexId, targets: &[VertexId], budget: usize) -> Result<DistanceMap> {
        if let Some(tree) = self.cached(o) {
            if targets.iter().all(|t| tree.dist.contains_key(t)) {
                return Ok(tree.dist.clone());
            }
        }
        let wanted: VertexSet = targets.iter().collect();
        let mut pending = wanted.len();
        let mut search = Search::new(self, o)?;
        while pending > 0 {
            if search.settled.len() >= budget {
                return Err(Error::inconclusive(format!(
                    "distance search from {o} exhausted its budget of {budget} with {} targets unsettled",
                    pending
                )));
            }
            match search.settle_next()? {
                Some((v, _)) => {
                    if wanted.contains(&v) {
                        pending -= 1;
                    }
                }
                None => {
                    return Err(Error::inconclusive(format!(
                        "{} targets are not reachable from {o}",
                        pending
                    )))
                }
            }
        }
        if let Some(why) = search.incomplete {
            return Err(Error::inconclusive(why));
        }
        self.store(o, &search.settled);
        Ok(search.settled.into_iter().collect())
    }

    /// Jump size over `edges`, optionally certified by an analytic bound that
    /// covers the whole (possibly infinite) edge set.
    pub fn jump_size_over(&self, edges: &[(VertexId, VertexId)], analytic_bound: Option<f64>, mode: JumpMode, scope: &str) -> Result<JumpSize> {
        let values = exec::try_map(edges, |(x, y)| match mode {
            JumpMode::EdgeLengthBound => self.sigma(x, y),
            JumpMode::Exact { budget } => {
                let rho = self.shortest_rho(x, y, budget)?;
                if rho.exact {
                    Ok(rho.rho)
                } else {
                    Err(Error::inconclusive(format!("rho({x},{y}) not resolved within budget")))
                }
            }
        })?;
        let sup = values.iter().copied().fold(0.0, f64::max);
        let (s, certified) = match analytic_bound {
            // rounding in the enumerated lengths may exceed an exact bound by an ulp or two
            Some(bound) if bound.is_finite() && values.iter().all(|&v| v <= bound * (1.0 + 1e-12)) => (bound.max(sup), true),
            _ => (sup, false),
        };
        Ok(JumpSize { s, enumerated_sup: sup, edges: values.len(), scope: scope.to_string(), certified })
    }

    /// Checks `Σ_y b(x,y) ρ(x,y)² <= μ(x)` on `scope`.
    ///
    /// Each vertex is first checked with `σ >= ρ`, which can only
    /// overestimate the sum; vertices that fail that bound are re-checked
    /// with exact local distances.
    pub fn check_intrinsic(&self, scope: &[VertexId], scope_name: &str) -> Certificate {
        let mut cert = Certificate::new("intrinsic metric", scope_name);
        let degrees = if self.length.needs_degrees() {
            match degree_table_with_shell(self.graph, scope) {
                Ok(t) => Some(t),
                Err(e) => {
                    cert.mark_inconclusive(e.to_string());
                    return cert;
                }
            }
        } else {
            None
        };
        let outcomes = exec::map(scope, |x| self.intrinsic_at(x, degrees.as_ref()));
        let mut slack = Slack::default();
        for (x, outcome) in scope.iter().zip(outcomes) {
            match outcome {
                Ok((sum, mu)) => {
                    slack.observe(mu - sum, x);
                    if sum > mu * (1.0 + INTRINSIC_REL_TOL) {
                        cert.fail(Witness::new(vec![x.to_string()], sum - mu, format!("sum b rho^2 = {sum} exceeds mu = {mu}")));
                    }
                }
                Err(e) => cert.mark_inconclusive(format!("{x}: {e}")),
            }
        }
        cert.slack = Some(slack);
        cert
    }

    /// `(Σ_y b ρ², μ(x))` at one vertex.
    fn intrinsic_at(&self, x: &VertexId, degrees: Option<&DistanceMap>) -> Result<(f64, f64)> {
        let g = self.graph;
        if require_tail(g, x)?.is_some() {
            return Err(Error::inconclusive(format!("{x} has unvisited neighbors with unknown distances")));
        }
        let mu = g.mu(x)?;
        let deg_of = |v: &VertexId| -> Result<f64> {
            match degrees.and_then(|t| t.get(v)) {
                Some(&d) => Ok(d),
                None => weighted_degree(g, v),
            }
        };
        let deg_x = if self.length.needs_degrees() { deg_of(x)? } else { f64::NAN };
        let mut nbrs = Vec::new();
        g.for_each_neighbor(x, &mut |y, b| nbrs.push((y.clone(), b)))?;
        let mut upper = KahanSum::new();
        let mut sigmas = Vec::with_capacity(nbrs.len());
        for (y, b) in &nbrs {
            let deg_y = if self.length.needs_degrees() { deg_of(y)? } else { f64::NAN };
            let s = self.length.length(x, y, *b, deg_x, deg_y)?;
            upper.add(b * s * s);
            sigmas.push(s);
        }
        if upper.value() <= mu * (1.0 + INTRINSIC_REL_TOL) {
            return Ok((upper.value(), mu));
        }
        // exact distances to the neighbors: a ball of radius max σ around x
        let radius = sigmas.iter().copied().fold(0.0, f64::max);
        let ball = self.ball(x, radius, usize::MAX)?;
        let dist: DistanceMap = ball.members.into_iter().collect();
        let exact: KahanSum = nbrs.iter().zip(&sigmas).map(|((y, b), s)| {
            let rho = dist.get(y).copied().unwrap_or(*s).min(*s);
            b * rho * rho
        }).collect();
        Ok((exact.value(), mu))
    }

    /// Per-ball (B*) check: the weighted degree is bounded on `B(o, r)`.
    pub fn check_b_star(&self, o: &VertexId, r: f64, budget: usize) -> Certificate {
        let scope = format!("B({o}, {r})");
        let mut cert = Certificate::new("(B*) bounded degree on ball", &scope);
        let ball = match self.ball(o, r, budget) {
            Ok(b) => b,
            Err(e) => return Certificate::inconclusive(cert.condition, scope, e.to_string()),
        };
        let members = ball.vertices();
        let degrees = exec::map(&members, |v| weighted_degree(self.graph, v));
        let mut sup = 0.0f64;
        for (v, d) in members.iter().zip(degrees) {
            match d {
                Ok(d) => sup = sup.max(d),
                Err(e) => cert.mark_inconclusive(format!("{v}: {e}")),
            }
        }
        cert.push_value("sup_deg", sup);
        cert.push_value("ball_size", members.len() as f64);
        if !ball.exhausted {
            cert.mark_inconclusive(format!("ball not exhausted within budget {budget}; sup over the partial ball is {sup}"));
        }
        cert
    }
}

/// Weighted degrees of `scope` and of its neighbor shell.
pub fn degree_table_with_shell<G: WeightedGraph + ?Sized>(g: &G, scope: &[VertexId]) -> Result<DistanceMap> {
    let shell = crate::graph::shell(g, scope)?;
    let all: Vec<VertexId> = scope.iter().chain(shell.iter()).cloned().collect();
    degree_table(g, &all)
}

pub fn degree_table<G: WeightedGraph + ?Sized>(g: &G, vertices: &[VertexId]) -> Result<DistanceMap> {
    let degs = exec::try_map(vertices, |v| weighted_degree(g, v))?;
    Ok(vertices.iter().cloned().zip(degs).collect())
}

/// Every edge with at least one endpoint in `scope`, each listed once.
pub fn incident_edges<G: WeightedGraph + ?Sized>(g: &G, scope: &[VertexId]) -> Result<Vec<(VertexId, VertexId)>> {
    let members: VertexSet = scope.iter().collect();
    let mut edges = Vec::new();
    for x in scope {
        g.for_each_neighbor(x, &mut |y, _| {
            if !members.contains(y) || x < y {
                edges.push((x.clone(), y.clone()));
            }
        })?;
    }
    Ok(edges)
}
