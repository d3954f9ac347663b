//! Discrete Schrödinger operators on weighted graphs: graph axioms, intrinsic
//! path metrics, hypothesis certificates for essential self-adjointness, the
//! triangular-graph example, and heuristic spectral probes.
//!
//! Data parallelism runs on rayon behind the `parallel` feature (on by default);
//! without it, or after [`exec::force_sequential`], every map runs on the calling thread.

// `!(x <= tol)` style checks are deliberate: NaN must fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certificate;
pub mod certify;
pub mod error;
pub mod exec;
pub mod golenia;
pub mod graph;
pub mod metrics;
pub mod numeric;
pub mod operator;
pub mod probe;
pub mod report;
pub mod sampling;
pub mod scope;
pub mod zoo;

pub use certificate::{Certificate, Slack, Verdict, Witness};
pub use error::{Error, Result};
pub use graph::{Ball, FiniteGraph, VertexId, WeightedGraph};
pub use metrics::{EdgeLength, JumpSize, PathMetric};
pub use numeric::Tolerance;
pub use operator::{CcFunction, Potential, VertexFunction};
pub use zoo::{FamilySpec, TriangularGraph};
