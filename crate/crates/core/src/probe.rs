//! Heuristic spectral diagnostics. Nothing here enters a certificate.
//!
//! Matrix work uses the unitary map `f ↦ μ^{1/2} f` from `ℓ²(X, μ)` to plain
//! `ℓ²(X)`, under which `L_V` becomes the symmetric matrix with diagonal
//! `Deg(x) + V(x)` and off-diagonal entries `-b(x, y) / √(μ(x) μ(y))`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::graph::{weighted_degree, Ball, VertexId, VertexMap, WeightedGraph};
use crate::numeric::KahanSum;
use crate::operator::{apply_operator, CcFunction, Potential, VertexFunction};
use crate::sampling::stream_rng;
use crate::zoo::{FamilyGraph, TriangularGraph};

pub const HEURISTIC_BANNER: &str = "HEURISTIC — not a self-adjointness proof";

/// Dirichlet compression of the symmetrized operator to a finite vertex set:
/// rows and columns outside the set are dropped, the diagonal keeps the full
/// `Deg(x) + V(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    pub vertices: Vec<VertexId>,
    pub sqrt_mu: Vec<f64>,
    pub diag: Vec<f64>,
    /// CSR off-diagonal part.
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

/// Compression to an exhausted ball.
pub fn truncate<G: WeightedGraph + ?Sized>(g: &G, v: &Potential, ball: &Ball) -> Result<TruncatedOperator> {
    if !ball.exhausted {
        return Err(Error::domain(format!("ball around {} of radius {} is not exhausted", ball.center, ball.radius)));
    }
    truncate_to(g, v, &ball.vertices())
}

/// Compression to an arbitrary finite vertex set, in the given order.
pub fn truncate_to<G: WeightedGraph + ?Sized>(g: &G, v: &Potential, vertices: &[VertexId]) -> Result<TruncatedOperator> {
    let pos: VertexMap<usize> = vertices.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    if pos.len() != vertices.len() {
        return Err(Error::domain("truncation vertex list has duplicates"));
    }
    let sqrt_mu = exec::try_map(vertices, |x| g.mu(x).map(f64::sqrt))?;
    let rows = exec::try_map(vertices, |x| {
        let diag = weighted_degree(g, x)? + v.at(x)?;
        let mut row = Vec::new();
        g.for_each_neighbor(x, &mut |y, b| {
            if let Some(&j) = pos.get(y) {
                row.push((j, b));
            }
        })?;
        Ok::<_, Error>((diag, row))
    })?;
    let mut t = TruncatedOperator { vertices: vertices.to_vec(), sqrt_mu, diag: Vec::new(), offsets: vec![0], cols: Vec::new(), vals: Vec::new() };
    for (i, (diag, mut row)) in rows.into_iter().enumerate() {
        t.diag.push(diag);
        row.sort_unstable_by_key(|(j, _)| *j);
        for (j, b) in row {
            t.cols.push(j);
            // the product μ(x) μ(y) is commutative, so (i, j) and (j, i) match bitwise
            t.vals.push(-b / (t.sqrt_mu[i] * t.sqrt_mu[j]));
        }
        t.offsets.push(t.cols.len());
    }
    Ok(t)
}

impl TruncatedOperator {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diag[i];
        }
        let row = &self.cols[self.offsets[i]..self.offsets[i + 1]];
        row.binary_search(&j).map_or(0.0, |k| self.vals[self.offsets[i] + k])
    }

    /// Bitwise symmetry of the stored matrix.
    pub fn is_symmetric(&self) -> bool {
        (0..self.len()).all(|i| {
            (self.offsets[i]..self.offsets[i + 1]).all(|k| self.entry(self.cols[k], i).to_bits() == self.vals[k].to_bits())
        })
    }

    pub fn matvec(&self, x: &[f64], out: &mut [f64]) {
        for i in 0..self.len() {
            let mut acc = self.diag[i] * x[i];
            for k in self.offsets[i]..self.offsets[i + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            out[i] = acc;
        }
    }

    /// `A + cI`.
    pub fn shifted(&self, c: f64) -> Self {
        let mut t = self.clone();
        t.diag.iter_mut().for_each(|d| *d += c);
        t
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.len(), self.len(), |i, j| self.entry(i, j))
    }

    /// `μ^{1/2} f` as a vector over the truncation (zero outside `f`'s support).
    pub fn conjugate(&self, f: &CcFunction) -> Vec<Complex64> {
        self.vertices.iter().zip(&self.sqrt_mu).map(|(x, s)| f.get(x) * *s).collect()
    }

    /// Complex matrix-vector product.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.len())
            .map(|i| {
                let mut acc = x[i] * self.diag[i];
                for k in self.offsets[i]..self.offsets[i + 1] {
                    acc += x[self.cols[k]] * self.vals[k];
                }
                acc
            })
            .collect()
    }

    /// Max over the truncation of `|A μ^{1/2} f - μ^{1/2} L_V f|`, for `f`
    /// whose support and neighbor shell lie inside the truncation.
    pub fn max_deviation_from_operator<G: WeightedGraph + ?Sized>(&self, g: &G, v: &Potential, f: &CcFunction) -> Result<f64> {
        let via_matrix = self.apply(&self.conjugate(f));
        let mut worst = 0.0f64;
        for (i, x) in self.vertices.iter().enumerate() {
            let direct = apply_operator(g, v, f, x)? * self.sqrt_mu[i];
            worst = worst.max((direct - via_matrix[i]).norm());
        }
        Ok(worst)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    pub banner: String,
    /// Ascending.
    pub values: Vec<f64>,
    /// `‖A v - λ v‖` for unit `v`.
    pub residuals: Vec<f64>,
    pub method: String,
}

/// Size up to which the dense symmetric solver is used.
pub const DENSE_LIMIT: usize = 1500;
const RESIDUAL_TOL: f64 = 1e-8;

/// The `m` smallest eigenvalues with explicit residual checks.
pub fn eigen_bottom(t: &TruncatedOperator, m: usize) -> Result<EigenResult> {
    let n = t.len();
    if n == 0 || m == 0 {
        return Ok(EigenResult { banner: HEURISTIC_BANNER.into(), values: vec![], residuals: vec![], method: "empty".into() });
    }
    let m = m.min(n);
    let pairs = if n <= DENSE_LIMIT { dense_bottom(t, m) } else { lanczos_bottom(t, m)? };
    let mut values = Vec::with_capacity(m);
    let mut residuals = Vec::with_capacity(m);
    let mut av = vec![0.0; n];
    for (lambda, vec) in &pairs {
        t.matvec(vec, &mut av);
        let r = av.iter().zip(vec).map(|(a, x)| (a - lambda * x).powi(2)).sum::<f64>().sqrt();
        if !(r <= RESIDUAL_TOL) {
            return Err(Error::Convergence(format!("eigenpair {lambda} has residual {r:e}")));
        }
        values.push(*lambda);
        residuals.push(r);
    }
    let method = if n <= DENSE_LIMIT { "dense symmetric QR" } else { "Lanczos with full reorthogonalization and locking" };
    Ok(EigenResult { banner: HEURISTIC_BANNER.into(), values, residuals, method: method.into() })
}

fn dense_bottom(t: &TruncatedOperator, m: usize) -> Vec<(f64, Vec<f64>)> {
    let eig = SymmetricEigen::new(t.to_dense());
    let mut order: Vec<usize> = (0..t.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    order.into_iter().take(m).map(|k| (eig.eigenvalues[k], eig.eigenvectors.column(k).iter().copied().collect())).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(y, x)| *y += alpha * x);
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

/// Two passes of classical Gram-Schmidt against `basis`.
fn orthogonalize<'a>(v: &mut [f64], basis: impl Iterator<Item = &'a [f64]> + Clone) {
    for _ in 0..2 {
        for b in basis.clone() {
            let c = dot(v, b);
            axpy(-c, b, v);
        }
    }
}

/// Lanczos runs deflated against every locked eigenvector; each run locks its
/// converged bottom Ritz pairs. Stops once a run finds nothing below the
/// current `m`-th smallest locked value, which also recovers multiplicities.
fn lanczos_bottom(t: &TruncatedOperator, m: usize) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = t.len();
    let scale = (0..n).map(|i| t.diag[i].abs() + (t.offsets[i]..t.offsets[i + 1]).map(|k| t.vals[k].abs()).sum::<f64>()).fold(0.0, f64::max).max(1.0);
    let mut locked: Vec<(f64, Vec<f64>)> = Vec::new();
    for run in 0..(4 * m + 8) {
        let mut rng = stream_rng(0x01a9_c705, run as u64);
        let mut start: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        orthogonalize(&mut start, locked.iter().map(|(_, v)| v.as_slice()));
        if normalize(&mut start) == 0.0 {
            break;
        }
        let ritz = lanczos_run(t, start, &locked, m, scale)?;
        let Some(&(lowest, _)) = ritz.first() else { break };
        let done = locked.len() >= m && {
            let mut vals: Vec<f64> = locked.iter().map(|(l, _)| *l).collect();
            vals.sort_by(f64::total_cmp);
            lowest >= vals[m - 1] - RESIDUAL_TOL
        };
        locked.extend(ritz);
        if done {
            break;
        }
    }
    locked.sort_by(|a, b| a.0.total_cmp(&b.0));
    if locked.len() < m {
        return Err(Error::Convergence(format!("only {} of {m} eigenpairs converged", locked.len())));
    }
    locked.truncate(m);
    Ok(locked)
}

/// One Lanczos run; returns the converged bottom Ritz pairs (at most `need`).
fn lanczos_run(t: &TruncatedOperator, start: Vec<f64>, locked: &[(f64, Vec<f64>)], need: usize, scale: f64) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = t.len();
    let free = n - locked.len();
    let max_steps = free.min(800);
    let mut basis: Vec<Vec<f64>> = vec![start];
    let (mut alpha, mut beta): (Vec<f64>, Vec<f64>) = (Vec::new(), Vec::new());
    let mut w = vec![0.0; n];
    let mut j = 0;
    loop {
        t.matvec(&basis[j], &mut w);
        let a = dot(&w, &basis[j]);
        alpha.push(a);
        axpy(-a, &basis[j], &mut w);
        if j > 0 {
            axpy(-beta[j - 1], &basis[j - 1], &mut w);
        }
        orthogonalize(&mut w, basis.iter().map(Vec::as_slice).chain(locked.iter().map(|(_, v)| v.as_slice())));
        let b = dot(&w, &w).sqrt();
        let exhausted = b <= 1e-13 * scale || j + 1 >= max_steps;
        if (j + 1) % 25 == 0 || exhausted {
            let pairs = ritz_pairs(&alpha, &beta, &basis, b, need, exhausted);
            if pairs.len() >= need.min(j + 1) || exhausted {
                // explicit residual check before locking
                let mut av = vec![0.0; n];
                let ok: Vec<(f64, Vec<f64>)> = pairs
                    .into_iter()
                    .take_while(|(l, v)| {
                        t.matvec(v, &mut av);
                        av.iter().zip(v).map(|(a, x)| (a - l * x).powi(2)).sum::<f64>().sqrt() <= RESIDUAL_TOL * 0.1
                    })
                    .collect();
                if !ok.is_empty() || exhausted {
                    return Ok(ok);
                }
            }
        }
        beta.push(b);
        w.iter_mut().for_each(|x| *x /= b);
        basis.push(std::mem::replace(&mut w, vec![0.0; n]));
        j += 1;
    }
}

/// Bottom Ritz pairs of the current tridiagonal whose residual estimate
/// `|β s_last|` is small; only the converged prefix is returned.
fn ritz_pairs(alpha: &[f64], beta: &[f64], basis: &[Vec<f64>], b_next: f64, need: usize, exhausted: bool) -> Vec<(f64, Vec<f64>)> {
    let k = alpha.len();
    let tri = DMatrix::from_fn(k, k, |i, j| match i.abs_diff(j) {
        0 => alpha[i],
        1 => beta[i.min(j)],
        _ => 0.0,
    });
    let eig = SymmetricEigen::new(tri);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let n = basis[0].len();
    let mut out = Vec::new();
    for &idx in order.iter().take(need) {
        let s = eig.eigenvectors.column(idx);
        if !exhausted && (b_next * s[k - 1]).abs() > RESIDUAL_TOL * 0.01 {
            break;
        }
        let mut v = vec![0.0; n];
        for (i, bv) in basis.iter().enumerate().take(k) {
            axpy(s[i], bv, &mut v);
        }
        normalize(&mut v);
        out.push((eig.eigenvalues[idx], v));
    }
    out
}

/// Radial part of `L_V` on the triangular graph: for row-constant `u`,
/// `(L_V u)(k) = l_k u(k-1) + d_k u(k) + p_k u(k+1)` with
/// `l_k = -(k-1)/(2√k)`, `p_k = -(k+1)/(2√k)`, `d_k = √k + V(k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialOperator {
    pub rows: u32,
    /// Index `k - 1` holds row `k`.
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
    /// `m(k) = Σ_{x in row k} μ(x)`.
    pub measure: Vec<f64>,
}

/// Reads the recursion coefficients off the graph, checking that every
/// vertex of a row sees the same coefficients and potential.
pub fn radial_reduce(g: &FamilyGraph, v: &VertexFunction, rows: u32) -> Result<RadialOperator> {
    let tri = g.as_triangular().ok_or_else(|| Error::domain(format!("radial reduction needs the triangular family, got {}", g.describe())))?;
    radial_reduce_triangular(tri, v, rows)
}

pub fn radial_reduce_triangular(g: &TriangularGraph, v: &VertexFunction, rows: u32) -> Result<RadialOperator> {
    if rows == 0 || g.rows.is_some_and(|r| r < rows + 1) {
        return Err(Error::domain(format!("radial reduction to {rows} rows needs rows 1..={} in the graph", rows + 1)));
    }
    let per_row = exec::try_map(&(1..=rows).collect::<Vec<u32>>(), |&k| {
        let mut first: Option<[f64; 4]> = None;
        let mut mass = KahanSum::new();
        for x in TriangularGraph::row_cells(k) {
            let mu = g.mu(&x)?;
            mass.add(mu);
            let (mut back, mut fwd, mut same) = (KahanSum::new(), KahanSum::new(), 0.0);
            g.for_each_neighbor(&x, &mut |y, b| match y.row() {
                Some(r) if r + 1 == k => back.add(b),
                Some(r) if r == k + 1 => fwd.add(b),
                _ => same += b,
            })?;
            if same != 0.0 {
                return Err(Error::domain(format!("{x} has neighbors outside rows {} and {}", k - 1, k + 1)));
            }
            let coeffs = [-back.value() / mu, back.value() / mu + fwd.value() / mu + v.at(&x)?, -fwd.value() / mu, mu];
            match first {
                None => first = Some(coeffs),
                Some(c) if c.iter().zip(&coeffs).all(|(a, b)| (a - b).abs() <= 1e-12 * a.abs().max(1.0)) => {}
                Some(_) => return Err(Error::domain(format!("row {k} is not radially symmetric at {x}"))),
            }
        }
        let c = first.expect("row is nonempty");
        Ok::<_, Error>((c[0], c[1], c[2], mass.value()))
    })?;
    Ok(RadialOperator {
        rows,
        lower: per_row.iter().map(|r| r.0).collect(),
        diag: per_row.iter().map(|r| r.1).collect(),
        upper: per_row.iter().map(|r| r.2).collect(),
        measure: per_row.iter().map(|r| r.3).collect(),
    })
}

impl RadialOperator {
    /// Closed-form coefficients for `V(k) = potential(k)`.
    pub fn triangular_closed_form(rows: u32, potential: impl Fn(u32) -> f64) -> Self {
        let ks = 1..=rows;
        let s = |k: u32| (k as f64).sqrt();
        RadialOperator {
            rows,
            lower: ks.clone().map(|k| -((k - 1) as f64) / (2.0 * s(k))).collect(),
            diag: ks.clone().map(|k| s(k) + potential(k)).collect(),
            upper: ks.clone().map(|k| -((k + 1) as f64) / (2.0 * s(k))).collect(),
            measure: ks.map(|k| 2.0 * (k as f64).powf(1.5)).collect(),
        }
    }

    /// `u` holds rows `1..=rows + 1`; the result holds rows `1..=rows`.
    pub fn apply(&self, u: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(u.len(), self.rows as usize + 1, "profile needs rows 1..=rows+1");
        (0..self.rows as usize)
            .map(|i| {
                let back = if i > 0 { u[i - 1] * self.lower[i] } else { Complex64::default() };
                back + u[i] * self.diag[i] + u[i + 1] * self.upper[i]
            })
            .collect()
    }

    /// Radial inner product `Σ_k m(k) u(k) conj(w(k))` over rows `1..=rows`.
    pub fn inner(&self, u: &[Complex64], w: &[Complex64]) -> Complex64 {
        self.measure.iter().zip(u).zip(w).map(|((m, a), b)| a * b.conj() * *m).sum()
    }

    /// Max over rows `1..=rows` and all their vertices of the gap between the
    /// radial application and the full operator on the lifted profile.
    pub fn max_deviation_from_operator<G: WeightedGraph + ?Sized>(&self, g: &G, v: &Potential, u: &[Complex64]) -> Result<f64> {
        let lifted = lift(u);
        let radial = self.apply(u);
        let mut worst = 0.0f64;
        for k in 1..=self.rows {
            for x in TriangularGraph::row_cells(k) {
                let full = apply_operator(g, v, &lifted, &x)?;
                worst = worst.max((full - radial[k as usize - 1]).norm());
            }
        }
        Ok(worst)
    }
}

/// Row-constant function with value `u[k-1]` on row `k`.
pub fn lift(u: &[Complex64]) -> CcFunction {
    CcFunction::from_pairs(u.iter().enumerate().filter(|(_, v)| **v != Complex64::default()).flat_map(|(i, v)| {
        TriangularGraph::row_cells(i as u32 + 1).map(move |x| (x, *v))
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeficiencyReport {
    pub banner: String,
    pub z: [f64; 2],
    pub rows: u32,
    /// `log10 S_K` for `K = 1..=rows`, `S_K = Σ_{k <= K} m(k) |u(k)|²`.
    pub log10_partial_norms: Vec<f64>,
    /// `log10 |u(k)|`.
    pub log10_abs_u: Vec<f64>,
    pub label: String,
}

/// Solves `(L - z) u = 0` radially from `u(1) = u1` by forward recursion, with
/// running rescaling so that neither `u` nor `S_K` over- or underflows.
pub fn deficiency_probe(r: &RadialOperator, z: Complex64, rows: u32, u1: Complex64) -> Result<DeficiencyReport> {
    if rows < 3 || rows > r.rows {
        return Err(Error::domain(format!("deficiency probe needs 3 <= rows <= {}, got {rows}", r.rows)));
    }
    if z.im == 0.0 {
        return Err(Error::domain("z must have nonzero imaginary part"));
    }
    if u1 == Complex64::default() {
        return Err(Error::domain("initial value must be nonzero"));
    }
    // u values are stored as (mantissa, log10 scale)
    let mut log_scale = 0.0f64;
    let (mut prev, mut cur) = (Complex64::default(), u1);
    let mut log10_abs_u = Vec::with_capacity(rows as usize);
    let mut log10_s = Vec::with_capacity(rows as usize);
    let mut log_s = f64::NEG_INFINITY;
    for k in 1..=rows {
        let i = k as usize - 1;
        let log_abs = cur.norm().log10() + log_scale;
        log10_abs_u.push(log_abs);
        let log_term = r.measure[i].log10() + 2.0 * log_abs;
        log_s = log10_add(log_s, log_term);
        log10_s.push(log_s);
        if k == rows {
            break;
        }
        if r.upper[i] == 0.0 {
            return Err(Error::domain(format!("recursion coefficient vanishes at row {k}")));
        }
        let next = -(prev * r.lower[i] + cur * (r.diag[i] - z)) / r.upper[i];
        prev = cur;
        cur = next;
        let big = cur.norm().max(prev.norm());
        if big > 1e100 || (big < 1e-100 && big > 0.0) {
            let e = big.log10().floor();
            let f = 10f64.powf(-e);
            prev *= f;
            cur *= f;
            log_scale += e;
        }
    }
    let label = growth_label(&log10_s);
    Ok(DeficiencyReport { banner: HEURISTIC_BANNER.into(), z: [z.re, z.im], rows, log10_partial_norms: log10_s, log10_abs_u, label })
}

fn log10_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (1.0 + 10f64.powf(lo - hi)).log10()
}

/// Compares the growth of `log10 S_K` over the two halves of the tail.
fn growth_label(log10_s: &[f64]) -> String {
    let n = log10_s.len();
    let (q1, q2, q3) = (log10_s[n / 2], log10_s[3 * n / 4], log10_s[n - 1]);
    if q3 - q2 > 1e-3 && q3 - q2 >= 0.5 * (q2 - q1) {
        "S_K keeps growing: no square-summable solution seen (limit-point-like, heuristic)".into()
    } else if q3 - q2 < 1e-6 {
        "S_K levels off: solution looks square-summable (limit-circle-like, heuristic)".into()
    } else {
        "S_K growth is slowing; trend undecided (heuristic)".into()
    }
}

/// Bottom eigenvalues of the triangular example truncated to rows `1..=rows`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenTrendPoint {
    pub rows: u32,
    pub size: usize,
    pub bottom: Vec<f64>,
    pub residuals: Vec<f64>,
}

pub fn triangular_truncation(rows: u32) -> Result<TruncatedOperator> {
    let g = TriangularGraph::infinite();
    truncate_to(&g, &Potential::new(crate::zoo::triangular_potential_fn()), &TriangularGraph::rows_range(1, rows))
}

pub fn triangular_eigen_trend(rows: &[u32], m: usize) -> Result<Vec<EigenTrendPoint>> {
    rows.iter()
        .map(|&k| {
            let t = triangular_truncation(k)?;
            let e = eigen_bottom(&t, m)?;
            Ok(EigenTrendPoint { rows: k, size: t.len(), bottom: e.values, residuals: e.residuals })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FiniteGraph;

    fn two_vertex() -> FiniteGraph {
        FiniteGraph::new(
            vec![(VertexId::Index(0), 1.0), (VertexId::Index(1), 1.0)],
            vec![(VertexId::Index(0), VertexId::Index(1), 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn two_vertex_matrix_and_spectrum() {
        let g = two_vertex();
        let t = truncate_to(&g, &Potential::zero(), &[VertexId::Index(0), VertexId::Index(1)]).unwrap();
        assert_eq!(t.to_dense(), DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
        let e = eigen_bottom(&t, 2).unwrap();
        assert!(e.values[0].abs() < 1e-14 && (e.values[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn triangular_diagonal_vanishes() {
        let t = triangular_truncation(12).unwrap();
        assert!(t.is_symmetric());
        assert!(t.diag.iter().all(|d| d.abs() < 1e-12));
    }

    #[test]
    fn non_exhausted_ball_is_rejected() {
        let g = two_vertex();
        let ball = Ball { center: VertexId::Index(0), radius: 1.0, members: vec![(VertexId::Index(0), 0.0)], exhausted: false };
        assert!(truncate(&g, &Potential::zero(), &ball).is_err());
    }

    #[test]
    fn radial_constant_profile_with_zero_potential() {
        let r = RadialOperator::triangular_closed_form(10, |_| 0.0);
        let out = r.apply(&[Complex64::new(3.0, -1.0); 11]);
        assert!(out.iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn lanczos_matches_dense_on_moderate_size() {
        let t = triangular_truncation(40).unwrap();
        let dense = dense_bottom(&t, 6);
        let lz = lanczos_bottom(&t, 6).unwrap();
        for ((a, _), (b, _)) in dense.iter().zip(&lz) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn lanczos_recovers_multiplicity() {
        // K_5 with mu = 1: Laplacian spectrum {0, 5, 5, 5, 5}
        let vs = (0..5).map(|i| (VertexId::Index(i), 1.0)).collect();
        let mut es = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                es.push((VertexId::Index(i), VertexId::Index(j), 1.0));
            }
        }
        let g = FiniteGraph::new(vs, es).unwrap();
        let t = truncate_to(&g, &Potential::zero(), &(0..5).map(VertexId::Index).collect::<Vec<_>>()).unwrap();
        let lz = lanczos_bottom(&t, 4).unwrap();
        let vals: Vec<f64> = lz.iter().map(|p| p.0).collect();
        assert!(vals[0].abs() < 1e-12);
        assert!(vals[1..].iter().all(|v| (v - 5.0).abs() < 1e-10), "{vals:?}");
    }
}
