//! Truncation-scoped certificates for the hypotheses of the essential
//! self-adjointness theorem and its growth-condition corollary, plus audits
//! of the two inequalities its proof feeds into Okazawa's perturbation lemma.
//!
//! A passing certificate says the hypotheses hold on the stated finite scope.
//! It never claims essential self-adjointness itself.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Slack, Verdict, Witness};
use crate::error::{Error, Result};
use crate::exec;
use crate::graph::{is_connected, shell, VertexId, VertexSet, WeightedGraph};
use crate::metrics::{DistanceMap, JumpSize, PathMetric};
use crate::numeric::{KahanSum, Tolerance};
use crate::operator::{apply_to, check_fc_scope, grad_squared_fn, inner_product, norm_sq, CcFunction, Potential, VertexFunction};
use crate::sampling::{random_cc_function, stream_rng};

/// A `(B*)` query: the ball `B(center, radius)` searched with `budget`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallQuery {
    pub center: VertexId,
    pub radius: f64,
    pub budget: usize,
}

pub struct SelfAdjointHypotheses<'m, 'g, G: WeightedGraph + ?Sized> {
    pub metric: &'m PathMetric<'g, G>,
    pub scope: Vec<VertexId>,
    pub scope_name: String,
    /// `V` with its split `V = U - W`.
    pub potential: Potential,
    pub c1: f64,
    pub c2: f64,
    pub balls: Vec<BallQuery>,
}

/// Runs `check` at every vertex of `scope` and folds the results into one
/// certificate; `check` returns the slack (negative means violated).
fn pointwise<F>(condition: &str, scope: &[VertexId], scope_name: &str, note: &str, check: F) -> Certificate
where
    F: Fn(&VertexId) -> Result<f64> + Sync,
{
    let mut cert = Certificate::new(condition, scope_name);
    let outcomes = exec::map(scope, |x| check(x));
    let mut slack = Slack::default();
    let mut reasons = 0usize;
    for (x, outcome) in scope.iter().zip(outcomes) {
        match outcome {
            Ok(s) if s.is_nan() => cert.fail(Witness::new(vec![x.to_string()], s, format!("{note}: NaN"))),
            Ok(s) => {
                slack.observe(s, x);
                if s < 0.0 {
                    cert.fail(Witness::new(vec![x.to_string()], s, note));
                }
            }
            Err(e) => {
                // one reason is enough to explain the verdict
                reasons += 1;
                if reasons == 1 {
                    cert.mark_inconclusive(format!("{x}: {e}"));
                } else {
                    cert.verdict = cert.verdict.and(Verdict::Inconclusive);
                }
            }
        }
    }
    if reasons > 1 {
        cert.push_value("inconclusive_vertices", reasons as f64);
    }
    cert.slack = Some(slack);
    cert
}

/// `|∇W|²(x) <= c1 + c2 W(x)` on `scope`; slack `c1 + c2 W - |∇W|²`.
pub fn check_gradient_condition<G: WeightedGraph + ?Sized>(g: &G, w: &VertexFunction, c1: f64, c2: f64, scope: &[VertexId], scope_name: &str) -> Certificate {
    pointwise(&format!("|grad W|^2 <= {c1} + {c2} W"), scope, scope_name, "|grad W|^2 exceeds c1 + c2 W", |x| {
        Ok(c1 + c2 * w.at(x)? - grad_squared_fn(g, w, x)?)
    })
}

pub fn certify_hypotheses<G: WeightedGraph + ?Sized>(h: &SelfAdjointHypotheses<'_, '_, G>) -> Result<Certificate> {
    if h.scope.is_empty() {
        return Err(Error::config("theorem scope is empty"));
    }
    if !(h.c1 >= 0.0 && h.c2 >= 0.0) {
        return Err(Error::config(format!("constants must be nonnegative, got c1 = {}, c2 = {}", h.c1, h.c2)));
    }
    let Some(split) = &h.potential.split else {
        return Err(Error::config("theorem hypotheses need a split V = U - W"));
    };
    let g = h.metric.graph();
    let (scope, name) = (&h.scope[..], h.scope_name.as_str());
    let mut cert = Certificate::new("self-adjointness hypotheses (truncation-scoped)", name);

    cert.push_part(pointwise("U >= 0", scope, name, "U < 0", |x| split.u.at(x)));
    cert.push_part(pointwise("W >= 0", scope, name, "W < 0", |x| split.w.at(x)));
    let tol = Tolerance::new(1e-12, 1e-12);
    cert.push_part(pointwise("V = U - W", scope, name, "U - W differs from V", |x| {
        let (v, u, w) = (h.potential.v.at(x)?, split.u.at(x)?, split.w.at(x)?);
        Ok(tol.allowance(v.abs().max(u.abs())) - (u - w - v).abs())
    }));
    cert.push_part(check_gradient_condition(g, &split.w, h.c1, h.c2, scope, name));
    cert.push_part(check_fc_scope(g, scope, name));
    cert.push_part(h.metric.check_intrinsic(scope, name));
    for q in &h.balls {
        cert.push_part(h.metric.check_b_star(&q.center, q.radius, q.budget));
    }
    let mut conn = Certificate::new("connected", name);
    match is_connected(g, scope) {
        Ok(true) => {}
        Ok(false) => conn.fail(Witness::new(vec![], 0.0, "scope is not connected in the induced subgraph")),
        Err(e) => conn.mark_inconclusive(e.to_string()),
    }
    cert.push_part(conn);
    cert.push_value("c1", h.c1);
    cert.push_value("c2", h.c2);
    Ok(cert)
}

pub struct CorollaryHypotheses {
    pub o: VertexId,
    pub b1: f64,
    pub b2: f64,
    pub jump: JumpSize,
    pub scope: Vec<VertexId>,
    pub scope_name: String,
    /// Vertex budget for the distance search from `o`.
    pub budget: usize,
}

/// Output of [`corollary_decomposition`].
pub struct Decomposition {
    /// `V` split as `U - W`.
    pub potential: Potential,
    pub c1: f64,
    pub c2: f64,
    /// `ρ(o, ·)` on the scope and its neighbor shell.
    pub rho: DistanceMap,
    pub certificate: Certificate,
}

impl Decomposition {
    pub fn w(&self) -> &VertexFunction {
        &self.potential.split.as_ref().expect("decomposition has a split").w
    }

    pub fn u(&self) -> &VertexFunction {
        &self.potential.split.as_ref().expect("decomposition has a split").u
    }
}

/// Builds `W = b1 + b2 (ρ(o, ·) + s)²` and `U = V + W`, and checks the
/// growth condition, `U >= 0` and `|∇W|² <= 9 b2 W` on the scope.
pub fn corollary_decomposition<G: WeightedGraph + ?Sized>(metric: &PathMetric<'_, G>, v: &VertexFunction, h: &CorollaryHypotheses) -> Result<Decomposition> {
    if !(h.b1 >= 0.0 && h.b2 >= 0.0) {
        return Err(Error::config(format!("b1 and b2 must be nonnegative, got {} and {}", h.b1, h.b2)));
    }
    if h.scope.is_empty() {
        return Err(Error::config("corollary scope is empty"));
    }
    let g = metric.graph();
    let (scope, name) = (&h.scope[..], h.scope_name.as_str());
    let mut cert = Certificate::new(format!("growth decomposition (b1 = {}, b2 = {})", h.b1, h.b2), name);

    let s = h.jump.s;
    let mut jump = Certificate::new("(J) finite jump size", &h.jump.scope);
    jump.push_value("s", s);
    if !s.is_finite() {
        jump.fail(Witness::new(vec![], s, "jump size is infinite"));
    } else if !h.jump.certified {
        jump.mark_inconclusive(format!("jump size {s} is the supremum over {} enumerated edges only", h.jump.edges));
    }
    cert.push_part(jump);

    let outer = shell(g, scope)?;
    let targets: Vec<VertexId> = scope.iter().chain(&outer).cloned().collect();
    let all = metric.distances_to(&h.o, &targets, h.budget)?;
    let rho: DistanceMap = targets.iter().map(|x| (x.clone(), all[x])).collect();

    let w_table = rho.iter().map(|(x, r)| (x, h.b1 + h.b2 * (r + s) * (r + s)));
    let w = VertexFunction::from_table(format!("W = {} + {} (rho + s)^2", h.b1, h.b2), w_table, None);
    let u = v.plus(&w);
    let (b1, b2) = (h.b1, h.b2);

    cert.push_part(pointwise(&format!("V >= -{b1} - {b2} rho^2"), scope, name, "growth condition violated", |x| {
        let r = rho[x];
        Ok(v.at(x)? + b1 + b2 * r * r)
    }));
    cert.push_part(pointwise("U >= 0", scope, name, "U < 0", |x| u.at(x)));
    let c2 = 9.0 * h.b2;
    cert.push_part(check_gradient_condition(g, &w, 0.0, c2, scope, name));
    cert.push_value("s", s);
    cert.push_value("c1", 0.0);
    cert.push_value("c2", c2);
    let potential = Potential { v: v.clone(), split: Some(crate::operator::Split { u, w }) };
    Ok(Decomposition { potential, c1: 0.0, c2, rho, certificate: cert })
}

/// For each `b2`, the least `b1 >= 0` with `V >= -b1 - b2 ρ(o, ·)²` on `scope`.
pub fn fit_growth_constants<G: WeightedGraph + ?Sized>(metric: &PathMetric<'_, G>, o: &VertexId, v: &VertexFunction, scope: &[VertexId], b2_grid: &[f64], budget: usize) -> Result<Vec<(f64, f64)>> {
    let rho = metric.distances_to(o, scope, budget)?;
    let pairs: Vec<(f64, f64)> = scope.iter().map(|x| Ok((-v.at(x)?, rho[x] * rho[x]))).collect::<Result<_>>()?;
    Ok(b2_grid
        .iter()
        .map(|&b2| {
            let b1 = pairs.iter().map(|(neg_v, r2)| neg_v - b2 * r2).fold(0.0, f64::max);
            (b2, b1)
        })
        .collect())
}

/// Quantities shared by both audits, all exact for finitely supported `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditTerms {
    pub norm_u_sq: f64,
    /// `2 Re (L_0 u, (W+1) u)`
    pub two_re_l0: f64,
    /// `‖L_U u‖²`
    pub lu_sq: f64,
    /// `‖(W+1) u‖²`
    pub w1u_sq: f64,
    /// `‖(L_U + W + 1) u‖²`
    pub total_sq: f64,
    /// `Im ((W+1) u, L_U u)`
    pub im_left: f64,
    /// `Im (W u, L_0 u)`
    pub im_right: f64,
    /// `Σ μ |(W+1) u| |L_U u|`, the rounding scale of `im_left`
    pub im_scale: f64,
}

fn term_mass<G: WeightedGraph + ?Sized>(g: &G, f: &CcFunction, h: &CcFunction) -> Result<f64> {
    let mut acc = KahanSum::new();
    for (x, a) in &f.values {
        acc.add(g.mu(x)? * a.norm() * h.get(x).norm());
    }
    Ok(acc.value())
}

pub fn audit_terms<G: WeightedGraph + ?Sized>(g: &G, u_pot: &VertexFunction, w: &VertexFunction, u: &CcFunction) -> Result<AuditTerms> {
    let l0u = apply_to(g, &Potential::zero(), u)?;
    let luu = l0u.add(&u.mul_real(u_pot)?);
    let wu = u.mul_real(w)?;
    let w1u = u.add(&wu);
    let total = luu.add(&w1u);
    let im_left = inner_product(g, &w1u, &luu)?.im;
    Ok(AuditTerms {
        norm_u_sq: norm_sq(g, u)?,
        two_re_l0: 2.0 * inner_product(g, &l0u, &w1u)?.re,
        lu_sq: norm_sq(g, &luu)?,
        w1u_sq: norm_sq(g, &w1u)?,
        total_sq: norm_sq(g, &total)?,
        im_left,
        im_right: inner_product(g, &wu, &l0u)?.im,
        im_scale: term_mass(g, &w1u, &luu)?,
    })
}

const AUDIT_TOL: f64 = 1e-10;

fn audit_scope(u: &CcFunction) -> String {
    format!("u supported on {} vertices", u.len())
}

/// `2 Re (L_0 u, (W+1) u) >= -c3 ‖u‖²` and
/// `‖L_U u‖² + ‖(W+1) u‖² <= ‖(L_U + W + 1) u‖² + c3 ‖u‖²`, `c3 = c1 + c2`.
pub fn audit_real_inequality<G: WeightedGraph + ?Sized>(g: &G, u_pot: &VertexFunction, w: &VertexFunction, c1: f64, c2: f64, u: &CcFunction) -> Certificate {
    match audit_terms(g, u_pot, w, u) {
        Ok(t) => real_verdict(&t, c1 + c2, audit_scope(u)),
        Err(e) => Certificate::inconclusive("real-part inequality", audit_scope(u), e.to_string()),
    }
}

pub fn real_verdict(t: &AuditTerms, c3: f64, scope: String) -> Certificate {
    let mut cert = Certificate::new("real-part inequality", scope);
    let bound = c3 * t.norm_u_sq;
    // |2 Re(L0 u, (W+1)u)| <= 2 ‖L0 u‖ ‖(W+1)u‖ bounds the rounding scale
    let scale1 = t.two_re_l0.abs().max(bound).max(2.0 * (t.lu_sq * t.w1u_sq).sqrt());
    let slack1 = t.two_re_l0 + bound;
    if slack1 < -AUDIT_TOL * scale1 {
        cert.fail(Witness::new(vec![], slack1, "2 Re(L0 u, (W+1)u) < -c3 |u|^2"));
    }
    let scale2 = [t.lu_sq, t.w1u_sq, t.total_sq, bound].into_iter().fold(0.0, f64::max);
    let slack2 = t.total_sq + bound - t.lu_sq - t.w1u_sq;
    if slack2 < -AUDIT_TOL * scale2 {
        cert.fail(Witness::new(vec![], slack2, "|L_U u|^2 + |(W+1)u|^2 > |(L_U+W+1)u|^2 + c3 |u|^2"));
    }
    cert.push_value("c3", c3);
    cert.push_value("two_re_l0", t.two_re_l0);
    cert.push_value("relative_slack_okazawa", slack1 / scale1.max(f64::MIN_POSITIVE));
    cert.push_value("relative_slack_chain", slack2 / scale2.max(f64::MIN_POSITIVE));
    cert
}

/// `Im ((W+1) u, L_U u) = Im (W u, L_0 u)` and
/// `|Im ((W+1) u, L_U u)| <= (c1/4) ‖u‖² + ((c2+2)/4) ‖(L_U + W + 1) u‖ ‖u‖`.
pub fn audit_imag_inequality<G: WeightedGraph + ?Sized>(g: &G, u_pot: &VertexFunction, w: &VertexFunction, c1: f64, c2: f64, u: &CcFunction) -> Certificate {
    match audit_terms(g, u_pot, w, u) {
        Ok(t) => imag_verdict(&t, c1, c2, audit_scope(u)),
        Err(e) => Certificate::inconclusive("imaginary-part inequality", audit_scope(u), e.to_string()),
    }
}

pub fn imag_verdict(t: &AuditTerms, c1: f64, c2: f64, scope: String) -> Certificate {
    let mut cert = Certificate::new("imaginary-part inequality", scope);
    let id_err = (t.im_left - t.im_right).abs();
    if id_err > Tolerance::IDENTITY.allowance(t.im_scale) {
        cert.fail(Witness::new(vec![], id_err, "Im((W+1)u, L_U u) != Im(Wu, L0 u)"));
    }
    let bound = c1 / 4.0 * t.norm_u_sq + (c2 + 2.0) / 4.0 * (t.total_sq * t.norm_u_sq).sqrt();
    let slack = bound - t.im_left.abs();
    let scale = bound.max(t.im_left.abs()).max(t.im_scale);
    if slack < -AUDIT_TOL * scale {
        cert.fail(Witness::new(vec![], slack, "|Im((W+1)u, L_U u)| exceeds the bound"));
    }
    cert.push_value("im_left", t.im_left);
    cert.push_value("identity_error", id_err);
    cert.push_value("relative_slack", slack / scale.max(f64::MIN_POSITIVE));
    cert
}

/// Outcome of a seeded audit batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditSummary {
    pub seed: u64,
    pub samples: usize,
    pub real_violations: usize,
    pub imag_violations: usize,
    pub inconclusive: usize,
    /// Smallest relative slacks seen (negative means violated).
    pub min_relative_slack_okazawa: f64,
    pub min_relative_slack_chain: f64,
    pub min_relative_slack_imag: f64,
    pub certificate: Certificate,
}

/// Audits both inequalities on `samples` random complex `u` supported in
/// `scope`, sample `i` drawing from ChaCha stream `(seed, i)`.
#[allow(clippy::too_many_arguments)]
pub fn run_audits<G: WeightedGraph + ?Sized>(
    g: &G,
    u_pot: &VertexFunction,
    w: &VertexFunction,
    c1: f64,
    c2: f64,
    scope: &[VertexId],
    scope_name: &str,
    samples: usize,
    seed: u64,
    max_support: usize,
) -> AuditSummary {
    let results = exec::map_range(0..samples, |i| {
        let mut rng = stream_rng(seed, i as u64);
        let u = random_cc_function(&mut rng, scope, max_support);
        audit_terms(g, u_pot, w, &u).map(|t| (real_verdict(&t, c1 + c2, audit_scope(&u)), imag_verdict(&t, c1, c2, audit_scope(&u))))
    });
    let mut cert = Certificate::new(format!("proof inequality audits ({samples} samples, seed {seed})"), scope_name);
    let (mut real_violations, mut imag_violations, mut inconclusive) = (0, 0, 0);
    let (mut s1, mut s2, mut s3) = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok((re, im)) => {
                s1 = s1.min(re.value("relative_slack_okazawa").unwrap_or(f64::NAN));
                s2 = s2.min(re.value("relative_slack_chain").unwrap_or(f64::NAN));
                s3 = s3.min(im.value("relative_slack").unwrap_or(f64::NAN));
                for (part, count) in [(re, &mut real_violations), (im, &mut imag_violations)] {
                    if part.verdict == Verdict::Fail {
                        *count += 1;
                        for w in part.witnesses {
                            cert.fail(Witness::new(vec![format!("sample {i}")], w.value, w.note));
                        }
                    }
                }
            }
            Err(e) => {
                inconclusive += 1;
                cert.mark_inconclusive(format!("sample {i}: {e}"));
            }
        }
    }
    cert.push_value("samples", samples as f64);
    cert.push_value("real_violations", real_violations as f64);
    cert.push_value("imag_violations", imag_violations as f64);
    AuditSummary {
        seed,
        samples,
        real_violations,
        imag_violations,
        inconclusive,
        min_relative_slack_okazawa: s1,
        min_relative_slack_chain: s2,
        min_relative_slack_imag: s3,
        certificate: cert,
    }
}

/// Real `u` on `support` minimizing `2 Re (L_0 u, (W+1) u) / ‖u‖²`, found as
/// the bottom eigenvector of the symmetrized form; returns `u` and the ratio.
pub fn adversarial_real_witness<G: WeightedGraph + ?Sized>(g: &G, w: &VertexFunction, support: &[VertexId]) -> Result<(CcFunction, f64)> {
    let n = support.len();
    if n == 0 {
        return Err(Error::domain("empty support"));
    }
    let pos: FxHashMap<&VertexId, usize> = support.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut scale = Vec::with_capacity(n);
    for x in support {
        scale.push((g.mu(x)? * (w.at(x)? + 1.0), g.mu(x)?));
    }
    // a[i][j] = (L_0 e_i)(x_j) μ_j (W_j + 1), then symmetrize
    let mut a = DMatrix::<f64>::zeros(n, n);
    for (i, x) in support.iter().enumerate() {
        let col = apply_to(g, &Potential::zero(), &CcFunction::delta(x.clone()))?;
        for (y, v) in &col.values {
            if let Some(&j) = pos.get(y) {
                a[(i, j)] += v.re * scale[j].0;
            }
        }
    }
    let sym = &a + a.transpose();
    let inv_sqrt: Vec<f64> = scale.iter().map(|(_, mu)| mu.sqrt().recip()).collect();
    let m = DMatrix::from_fn(n, n, |i, j| sym[(i, j)] * inv_sqrt[i] * inv_sqrt[j]);
    let eig = SymmetricEigen::new(m);
    let (k, &lambda) = eig.eigenvalues.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("nonempty");
    let vec = eig.eigenvectors.column(k);
    let u = CcFunction::from_pairs(support.iter().enumerate().map(|(i, x)| (x.clone(), Complex64::new(vec[i] * inv_sqrt[i], 0.0))));
    Ok((u, lambda))
}

/// Vertices of `scope` whose neighbors all lie in `scope`.
pub fn interior<G: WeightedGraph + ?Sized>(g: &G, scope: &[VertexId]) -> Result<Vec<VertexId>> {
    let members: VertexSet = scope.iter().collect();
    let flags = exec::try_map(scope, |x| {
        let mut inside = true;
        g.for_each_neighbor(x, &mut |y, _| inside &= members.contains(y))?;
        Ok::<_, Error>(inside)
    })?;
    Ok(scope.iter().zip(flags).filter(|(_, f)| *f).map(|(x, _)| x.clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FiniteGraph;
    use crate::zoo::{triangular_potential_fn, TriangularGraph};

    fn two_vertex() -> FiniteGraph {
        FiniteGraph::new(
            vec![(VertexId::Index(0), 1.0), (VertexId::Index(1), 1.0)],
            vec![(VertexId::Index(0), VertexId::Index(1), 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn delta_audit_with_zero_w() {
        let g = two_vertex();
        let u = CcFunction::delta(VertexId::Index(0));
        let cert = audit_real_inequality(&g, &VertexFunction::constant(0.5), &VertexFunction::zero(), 0.0, 0.0, &u);
        assert!(cert.is_pass(), "{cert}");
        let cert = audit_imag_inequality(&g, &VertexFunction::constant(0.5), &VertexFunction::zero(), 0.0, 0.0, &u.scale(Complex64::i()));
        assert!(cert.is_pass(), "{cert}");
        assert_eq!(cert.value("im_left"), Some(0.0));
    }

    #[test]
    fn real_u_has_zero_imaginary_part() {
        let g = TriangularGraph::infinite();
        let scope = TriangularGraph::rows_range(1, 5);
        let u = CcFunction::from_pairs(scope.iter().enumerate().map(|(i, x)| (x.clone(), Complex64::new(i as f64 - 3.0, 0.0))));
        let w = VertexFunction::from_fn("row", |x| x.row().map(|k| k as f64));
        let cert = audit_imag_inequality(&g, &VertexFunction::zero(), &w, 0.0, 100.0, &u);
        assert!(cert.is_pass(), "{cert}");
        assert_eq!(cert.value("im_left"), Some(0.0));
    }

    #[test]
    fn fit_constants_on_triangular() {
        let g = TriangularGraph::infinite();
        let m = PathMetric::degree_path(&g);
        let scope = TriangularGraph::rows_range(1, 30);
        let v = triangular_potential_fn();
        let fit = fit_growth_constants(&m, &TriangularGraph::origin(), &v, &scope, &[0.0, 1.0, 4.0], usize::MAX).unwrap();
        assert_eq!(fit[2], (4.0, 1.0));
        assert!((fit[0].1 - 30f64.sqrt()).abs() < 1e-12);
        assert!(fit[1].1 >= fit[2].1);
        let zero = fit_growth_constants(&m, &TriangularGraph::origin(), &VertexFunction::constant(0.5), &scope, &[0.0, 2.0], usize::MAX).unwrap();
        assert!(zero.iter().all(|(_, b1)| *b1 == 0.0));
    }

    #[test]
    fn pointwise_reports_worst_slack() {
        let scope: Vec<VertexId> = (0..5).map(VertexId::Index).collect();
        let cert = pointwise("x >= 2", &scope, "0..5", "below 2", |x| match x {
            VertexId::Index(i) => Ok(*i as f64 - 2.0),
            _ => unreachable!(),
        });
        assert_eq!(cert.violations, 2);
        assert_eq!(cert.slack.as_ref().unwrap().min, -2.0);
    }
}
