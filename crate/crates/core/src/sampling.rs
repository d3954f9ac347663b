//! Seeded random inputs: complex test functions, small weighted graphs and
//! potentials. Every sample owns a ChaCha stream derived from `(seed, index)`,
//! so results do not depend on thread scheduling.

use num_complex::Complex64;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::graph::{FiniteGraph, VertexId};
use crate::operator::{CcFunction, VertexFunction};

pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Standard complex Gaussian (independent real and imaginary parts).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Log-uniform value in `[lo, hi]`.
pub fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..=hi.ln())).exp()
}

/// Support of `1..=max_support` vertices drawn uniformly from `scope`,
/// complex Gaussian values.
pub fn random_cc_function<R: Rng + ?Sized>(rng: &mut R, scope: &[VertexId], max_support: usize) -> CcFunction {
    if scope.is_empty() || max_support == 0 {
        return CcFunction::new();
    }
    let size = rng.random_range(1..=max_support.min(scope.len()));
    let picks = index::sample(rng, scope.len(), size).into_vec();
    CcFunction::from_pairs(picks.into_iter().map(|i| (scope[i].clone(), complex_gaussian(rng))))
}

/// Like [`random_cc_function`] with real values.
pub fn random_real_cc_function<R: Rng + ?Sized>(rng: &mut R, scope: &[VertexId], max_support: usize) -> CcFunction {
    let f = random_cc_function(rng, scope, max_support);
    CcFunction::from_pairs(f.values.into_iter().map(|(x, v)| (x, Complex64::new(v.re, 0.0))))
}

/// Graph on `1..=max_n` vertices `0..n`; each pair is joined with a random
/// probability, weights `b` and `μ` log-uniform over four decades.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, max_n: usize) -> FiniteGraph {
    let n = rng.random_range(1..=max_n.max(1));
    let p = rng.random_range(0.05..0.6);
    let vertices = (0..n).map(|i| (VertexId::Index(i as u64), log_uniform(rng, 1e-2, 1e2))).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                edges.push((VertexId::Index(i as u64), VertexId::Index(j as u64), log_uniform(rng, 1e-2, 1e2)));
            }
        }
    }
    FiniteGraph::new(vertices, edges).expect("generated graph is valid")
}

/// Real potential table on `vertices` with values in `[lo, hi]`.
pub fn random_table<R: Rng + ?Sized>(rng: &mut R, vertices: &[VertexId], lo: f64, hi: f64) -> VertexFunction {
    let table: Vec<(VertexId, f64)> = vertices.iter().map(|x| (x.clone(), rng.random_range(lo..=hi))).collect();
    VertexFunction::from_table("random table", table, None)
}

/// One random instance for the Green/Leibniz identity suite.
pub struct IdentityTrial {
    pub graph: FiniteGraph,
    pub w: VertexFunction,
    pub f: CcFunction,
    pub u: CcFunction,
}

pub fn identity_trial(seed: u64, index: u64, max_n: usize) -> IdentityTrial {
    let mut rng = stream_rng(seed, index);
    let graph = random_graph(&mut rng, max_n);
    let vertices: Vec<VertexId> = (0..graph.len() as u64).map(VertexId::Index).collect();
    let w = random_table(&mut rng, &vertices, -10.0, 10.0);
    let f = random_cc_function(&mut rng, &vertices, vertices.len());
    let u = random_cc_function(&mut rng, &vertices, vertices.len());
    IdentityTrial { graph, w, f, u }
}
