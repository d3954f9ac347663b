//! The formal Schrödinger operator `L_V f(x) = (1/μ(x)) Σ_y b(x,y)(f(x) - f(y)) + V(x) f(x)`
//! on finitely supported functions, with the inner products, the quadratic
//! form of Green's formula, and identity checkers.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Slack, Witness};
use crate::error::{Error, Result};
use crate::graph::{require_tail, shell, weight_sum, VertexId, VertexMap, WeightedGraph};
use crate::numeric::{ComplexKahanSum, KahanSum, Tolerance};

type Eval = Arc<dyn Fn(&VertexId) -> Option<f64> + Send + Sync>;

/// Real-valued vertex function given by a table or a formula. Vertices
/// where it has no value make every computation that needs them inconclusive.
#[derive(Clone)]
pub struct VertexFunction {
    name: String,
    eval: Eval,
}

impl fmt::Debug for VertexFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexFunction({})", self.name)
    }
}

impl VertexFunction {
    pub fn from_fn(name: impl Into<String>, f: impl Fn(&VertexId) -> Option<f64> + Send + Sync + 'static) -> Self {
        VertexFunction { name: name.into(), eval: Arc::new(f) }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn constant(c: f64) -> Self {
        Self::from_fn(format!("constant {c}"), move |_| Some(c))
    }

    pub fn from_table(name: impl Into<String>, table: impl IntoIterator<Item = (VertexId, f64)>, default: Option<f64>) -> Self {
        let table: VertexMap<f64> = table.into_iter().collect();
        Self::from_fn(name, move |x| table.get(x).copied().or(default))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn try_at(&self, x: &VertexId) -> Option<f64> {
        (self.eval)(x)
    }

    pub fn at(&self, x: &VertexId) -> Result<f64> {
        self.try_at(x).ok_or_else(|| Error::inconclusive(format!("{} has no value at {x}", self.name)))
    }

    /// Pointwise `self + other`.
    pub fn plus(&self, other: &VertexFunction) -> VertexFunction {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        Self::from_fn(format!("{} + {}", self.name, other.name), move |x| Some(a(x)? + b(x)?))
    }

    /// Pointwise `self - other`.
    pub fn minus(&self, other: &VertexFunction) -> VertexFunction {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        Self::from_fn(format!("{} - {}", self.name, other.name), move |x| Some(a(x)? - b(x)?))
    }
}

/// Nonnegative split `V = U - W`.
#[derive(Debug, Clone)]
pub struct Split {
    pub u: VertexFunction,
    pub w: VertexFunction,
}

/// Potential `V`, optionally carrying a split `V = U - W`.
#[derive(Debug, Clone)]
pub struct Potential {
    pub v: VertexFunction,
    pub split: Option<Split>,
}

impl Potential {
    pub fn new(v: VertexFunction) -> Self {
        Potential { v, split: None }
    }

    pub fn zero() -> Self {
        Self::new(VertexFunction::zero())
    }

    pub fn from_split(u: VertexFunction, w: VertexFunction) -> Self {
        Potential { v: u.minus(&w), split: Some(Split { u, w }) }
    }

    pub fn with_split(mut self, u: VertexFunction, w: VertexFunction) -> Self {
        self.split = Some(Split { u, w });
        self
    }

    pub fn at(&self, x: &VertexId) -> Result<f64> {
        self.v.at(x)
    }

    /// Verifies `U >= 0`, `W >= 0` and `U - W = V` (to 1e-12) on `scope`.
    pub fn check_split(&self, scope: &[VertexId], scope_name: &str) -> Certificate {
        let mut cert = Certificate::new("potential split V = U - W", scope_name);
        let Some(split) = &self.split else {
            return Certificate::inconclusive(cert.condition, scope_name, "no split supplied");
        };
        let tol = Tolerance::new(1e-12, 1e-12);
        for x in scope {
            let (v, u, w) = match (self.v.at(x), split.u.at(x), split.w.at(x)) {
                (Ok(v), Ok(u), Ok(w)) => (v, u, w),
                (Err(e), ..) | (_, Err(e), _) | (.., Err(e)) => {
                    cert.mark_inconclusive(e.to_string());
                    continue;
                }
            };
            if u < 0.0 {
                cert.fail(Witness::new(vec![x.to_string()], u, "U < 0"));
            }
            if w < 0.0 {
                cert.fail(Witness::new(vec![x.to_string()], w, "W < 0"));
            }
            if !tol.close(u - w, v, 0.0) {
                cert.fail(Witness::new(vec![x.to_string()], u - w - v, "U - W != V"));
            }
        }
        cert
    }
}

/// Finitely supported complex vertex function; absent vertices are zero.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CcFunction {
    #[serde(with = "complex_pairs")]
    pub values: BTreeMap<VertexId, Complex64>,
}

mod complex_pairs {
    use std::collections::BTreeMap;

    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::graph::VertexId;

    pub fn serialize<S: Serializer>(values: &BTreeMap<VertexId, Complex64>, s: S) -> Result<S::Ok, S::Error> {
        let pairs: BTreeMap<String, [f64; 2]> = values.iter().map(|(k, v)| (k.to_string(), [v.re, v.im])).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<VertexId, Complex64>, D::Error> {
        let pairs = BTreeMap::<VertexId, [f64; 2]>::deserialize(d)?;
        Ok(pairs.into_iter().map(|(k, [re, im])| (k, Complex64::new(re, im))).collect())
    }
}

impl CcFunction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn delta(x: VertexId) -> Self {
        Self::from_pairs([(x, Complex64::new(1.0, 0.0))])
    }

    pub fn indicator(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        Self::from_pairs(vertices.into_iter().map(|x| (x, Complex64::new(1.0, 0.0))))
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (VertexId, Complex64)>) -> Self {
        CcFunction { values: pairs.into_iter().collect() }
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn get(&self, x: &VertexId) -> Complex64 {
        self.values.get(x).copied().unwrap_or_default()
    }

    pub fn set(&mut self, x: VertexId, value: Complex64) {
        self.values.insert(x, value);
    }

    pub fn support(&self) -> impl Iterator<Item = &VertexId> {
        self.values.keys()
    }

    pub fn support_vec(&self) -> Vec<VertexId> {
        self.values.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_pairs(self.values.iter().map(|(k, v)| (k.clone(), v * c)))
    }

    pub fn conj(&self) -> Self {
        Self::from_pairs(self.values.iter().map(|(k, v)| (k.clone(), v.conj())))
    }

    /// Pointwise product with a real vertex function on the support.
    pub fn mul_real(&self, h: &VertexFunction) -> Result<Self> {
        let mut out = CcFunction::new();
        for (x, v) in &self.values {
            out.set(x.clone(), v * h.at(x)?);
        }
        Ok(out)
    }

    pub fn add(&self, other: &CcFunction) -> Self {
        let mut out = self.clone();
        for (x, v) in &other.values {
            *out.values.entry(x.clone()).or_default() += v;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.values.values().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Value lookup shared by the finitely supported and the table-backed paths.
trait Field {
    fn value(&self, x: &VertexId) -> Result<Complex64>;
}

impl Field for CcFunction {
    fn value(&self, x: &VertexId) -> Result<Complex64> {
        Ok(self.get(x))
    }
}

impl Field for VertexFunction {
    fn value(&self, x: &VertexId) -> Result<Complex64> {
        Ok(Complex64::new(self.at(x)?, 0.0))
    }
}

fn check_vertex<G: WeightedGraph + ?Sized>(g: &G, x: &VertexId) -> Result<()> {
    if g.contains(x) {
        Ok(())
    } else {
        Err(Error::UnknownVertex(x.clone()))
    }
}

/// `(L_V f)(x)` for finitely supported `f`.
pub fn apply_operator<G: WeightedGraph + ?Sized>(g: &G, v: &Potential, f: &CcFunction, x: &VertexId) -> Result<Complex64> {
    check_vertex(g, x)?;
    let mu = g.mu(x)?;
    let fx = f.get(x);
    let diff = if require_tail(g, x)?.is_none() {
        let mut acc = ComplexKahanSum::new();
        g.for_each_neighbor(x, &mut |y, b| acc.add((fx - f.get(y)) * b))?;
        acc.value()
    } else {
        // f(x) Σ_y b(x,y) - Σ_{y in supp f} b(x,y) f(y)
        let mut acc = ComplexKahanSum::new();
        acc.add(fx * weight_sum(g, x)?);
        for (y, fy) in &f.values {
            if y != x {
                acc.add(-fy * g.edge_weight(x, y)?);
            }
        }
        acc.value()
    };
    let pot = if fx == Complex64::default() { 0.0 } else { v.at(x)? };
    Ok(diff / mu + fx * pot)
}

/// `L_V f` on `supp f` and its neighbor shell (it vanishes elsewhere).
pub fn apply_to<G: WeightedGraph + ?Sized>(g: &G, v: &Potential, f: &CcFunction) -> Result<CcFunction> {
    let support = f.support_vec();
    for x in &support {
        check_vertex(g, x)?;
    }
    let outer = shell(g, &support)?;
    let mut out = CcFunction::new();
    for x in support.iter().chain(&outer) {
        out.set(x.clone(), apply_operator(g, v, f, x)?);
    }
    Ok(out)
}

fn grad_squared_field<G: WeightedGraph + ?Sized, F: Field>(g: &G, f: &F, x: &VertexId) -> Result<f64> {
    check_vertex(g, x)?;
    require_tail(g, x)?.map_or(Ok(()), |_| {
        Err(Error::inconclusive(format!("|grad|^2 at {x} needs values on unvisited neighbors")))
    })?;
    let fx = f.value(x)?;
    let mut acc = KahanSum::new();
    let mut err = None;
    g.for_each_neighbor(x, &mut |y, b| match f.value(y) {
        Ok(fy) => acc.add(b * (fx - fy).norm_sqr()),
        Err(e) => err = err.take().or(Some(e)),
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(acc.value() / g.mu(x)?)
}

/// `|∇f|²(x) = (1/μ(x)) Σ_y b(x,y) |f(x) - f(y)|²`.
pub fn grad_squared<G: WeightedGraph + ?Sized>(g: &G, f: &CcFunction, x: &VertexId) -> Result<f64> {
    if g.is_locally_finite_at(x) {
        return grad_squared_field(g, f, x);
    }
    // non-locally-finite x: |f(x)|² Σ_y b + Σ_{y in supp f} b (|f(x)-f(y)|² - |f(x)|²)
    let fx = f.get(x);
    let mut acc = KahanSum::new();
    acc.add(fx.norm_sqr() * weight_sum(g, x)?);
    for (y, fy) in &f.values {
        if y != x {
            let b = g.edge_weight(x, y)?;
            acc.add(b * ((fx - fy).norm_sqr() - fx.norm_sqr()));
        }
    }
    Ok(acc.value() / g.mu(x)?)
}

/// `|∇W|²(x)` for a real vertex function (e.g. the `W` of a split).
pub fn grad_squared_fn<G: WeightedGraph + ?Sized>(g: &G, w: &VertexFunction, x: &VertexId) -> Result<f64> {
    grad_squared_field(g, w, x)
}

/// `(f, h) = Σ_x μ(x) f(x) conj(h(x))`.
pub fn inner_product<G: WeightedGraph + ?Sized>(g: &G, f: &CcFunction, h: &CcFunction) -> Result<Complex64> {
    let (small, large, swap) = if f.len() <= h.len() { (f, h, false) } else { (h, f, true) };
    let mut acc = ComplexKahanSum::new();
    for (x, a) in &small.values {
        if let Some(b) = large.values.get(x) {
            let term = if swap { b * a.conj() } else { a * b.conj() };
            acc.add(term * g.mu(x)?);
        }
    }
    Ok(acc.value())
}

pub fn norm_sq<G: WeightedGraph + ?Sized>(g: &G, f: &CcFunction) -> Result<f64> {
    let mut acc = KahanSum::new();
    for (x, v) in &f.values {
        acc.add(g.mu(x)? * v.norm_sqr());
    }
    Ok(acc.value())
}

/// Gradient-plus-potential form and the total magnitude of its terms.
fn quadratic_form_with_mass<G: WeightedGraph + ?Sized>(g: &G, w: &VertexFunction, f: &CcFunction, u: &CcFunction) -> Result<(Complex64, f64)> {
    let support: Vec<VertexId> = f.support().chain(u.support()).cloned().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let in_support: FxHashSet<&VertexId> = support.iter().collect();
    let mut acc = ComplexKahanSum::new();
    let mut mass = KahanSum::new();
    let mut add = |term: Complex64, acc: &mut ComplexKahanSum| {
        acc.add(term);
        mass.add(term.norm());
    };
    for x in &support {
        check_vertex(g, x)?;
        let (fx, ux) = (f.get(x), u.get(x));
        match require_tail(g, x)? {
            None => {
                // ordered pairs (x, y) with x in the support, then (y, x) with y outside it
                let mut outside = Vec::new();
                let mut terms = Vec::new();
                g.for_each_neighbor(x, &mut |y, b| {
                    terms.push(b * (fx - f.get(y)) * (ux - u.get(y)).conj());
                    if !in_support.contains(y) {
                        outside.push(y.clone());
                    }
                })?;
                for t in terms {
                    add(t * 0.5, &mut acc);
                }
                for y in outside {
                    let b_yx = g.edge_weight(&y, x)?;
                    add(b_yx * fx * ux.conj() * 0.5, &mut acc);
                }
            }
            Some(_) => {
                // pairs inside the support directly, the rest through the total weight
                let total = weight_sum(g, x)?;
                let mut inside = KahanSum::new();
                for y in &support {
                    if y == x {
                        continue;
                    }
                    let b = g.edge_weight(x, y)?;
                    if b > 0.0 {
                        inside.add(b);
                        add(b * (fx - f.get(y)) * (ux - u.get(y)).conj() * 0.5, &mut acc);
                    }
                }
                // (x, y) and (y, x) for y outside the support, by symmetry of b
                add(fx * ux.conj() * (total - inside.value()), &mut acc);
            }
        }
        if fx != Complex64::default() && ux != Complex64::default() {
            add(fx * ux.conj() * (g.mu(x)? * w.at(x)?), &mut acc);
        }
    }
    Ok((acc.value(), mass.value()))
}

/// `½ Σ_{x,y} b(x,y) (∇_{x,y} f) conj(∇_{x,y} u) + Σ_x μ(x) W(x) f(x) conj(u(x))`.
pub fn quadratic_form<G: WeightedGraph + ?Sized>(g: &G, w: &VertexFunction, f: &CcFunction, u: &CcFunction) -> Result<Complex64> {
    Ok(quadratic_form_with_mass(g, w, f, u)?.0)
}

/// The three sides of Green's formula for `(f, u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreenSides {
    /// `(L_W f, u)_a`
    pub operator_left: Complex64,
    /// `Σ μ f conj(L_W u)`
    pub operator_right: Complex64,
    /// gradient-plus-potential form
    pub form: Complex64,
    /// Σ of the absolute values of the summed terms, the scale for relative errors
    pub term_mass: f64,
}

pub fn green_sides<G: WeightedGraph + ?Sized>(g: &G, w: &VertexFunction, f: &CcFunction, u: &CcFunction) -> Result<GreenSides> {
    let pot = Potential::new(w.clone());
    let lf = apply_to(g, &pot, f)?;
    let lu = apply_to(g, &pot, u)?;
    let operator_left = inner_product(g, &lf, u)?;
    let operator_right = inner_product(g, f, &lu)?;
    let (form, term_mass) = quadratic_form_with_mass(g, w, f, u)?;
    Ok(GreenSides { operator_left, operator_right, form, term_mass })
}

/// Three-way Green identity, pairwise relative agreement within `tol`.
pub fn check_green<G: WeightedGraph + ?Sized>(g: &G, w: &VertexFunction, f: &CcFunction, u: &CcFunction, tol: Tolerance) -> Certificate {
    let mut cert = Certificate::new("Green's formula", format!("supp f ({}) + supp u ({})", f.len(), u.len()));
    let sides = match green_sides(g, w, f, u) {
        Ok(s) => s,
        Err(e) => return Certificate::inconclusive(cert.condition, cert.scope, e.to_string()),
    };
    let vals = [("(L f, u)", sides.operator_left), ("(f, L u)", sides.operator_right), ("form", sides.form)];
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let (a, b) = (vals[i].1, vals[j].1);
        if !tol.close_c(a, b, sides.term_mass) {
            cert.fail(Witness::new(vec![], (a - b).norm(), format!("{} = {a} vs {} = {b}", vals[i].0, vals[j].0)));
        }
    }
    for (name, v) in vals {
        cert.push_value(format!("re {name}"), v.re);
        cert.push_value(format!("im {name}"), v.im);
    }
    cert.push_value("term_mass", sides.term_mass);
    cert
}

/// Both product-rule decompositions of `∇_{x,y}(f h)`.
pub fn check_leibniz(f: &CcFunction, h: &CcFunction, x: &VertexId, y: &VertexId, tol_abs: f64) -> Certificate {
    let mut cert = Certificate::new("Leibniz rule", format!("({x}, {y})"));
    let (fx, fy, hx, hy) = (f.get(x), f.get(y), h.get(x), h.get(y));
    let lhs = fx * hx - fy * hy;
    let first = fx * (hx - hy) + (fx - fy) * hy;
    let second = hx * (fx - fy) + (hx - hy) * fy;
    for (name, rhs) in [("f(x) grad h + (grad f) h(y)", first), ("h(x) grad f + (grad h) f(y)", second)] {
        let err = (lhs - rhs).norm();
        if err > tol_abs {
            cert.fail(Witness::new(vec![x.to_string(), y.to_string()], err, name));
        }
    }
    cert.push_value("abs_error", (lhs - first).norm().max((lhs - second).norm()));
    cert
}

/// Finiteness condition at `x`: `Σ_y b(x,y)² / μ(y) < ∞`.
pub fn check_fc<G: WeightedGraph + ?Sized>(g: &G, x: &VertexId) -> Certificate {
    let mut cert = Certificate::new("(FC) finiteness condition", x.to_string());
    let outcome = (|| -> Result<f64> {
        check_vertex(g, x)?;
        let tail = require_tail(g, x)?;
        let mut nbrs = Vec::new();
        g.for_each_neighbor(x, &mut |y, b| nbrs.push((y.clone(), b)))?;
        let mut acc = KahanSum::new();
        for (y, b) in nbrs {
            acc.add(b * b / g.mu(&y)?);
        }
        if let Some(t) = tail {
            acc.add(t.weight_sq_over_mu);
        }
        Ok(acc.value())
    })();
    match outcome {
        Ok(value) => {
            cert.push_value("sum b^2/mu", value);
            if !value.is_finite() {
                cert.fail(Witness::new(vec![x.to_string()], value, "sum b(x,y)^2/mu(y) diverges"));
            }
        }
        Err(e) => cert.mark_inconclusive(e.to_string()),
    }
    cert
}

/// (FC) over a vertex set, with the largest sum reported.
pub fn check_fc_scope<G: WeightedGraph + ?Sized>(g: &G, scope: &[VertexId], scope_name: &str) -> Certificate {
    let mut cert = Certificate::new("(FC) finiteness condition", scope_name);
    let parts = crate::exec::map(scope, |x| check_fc(g, x));
    let mut worst = Slack::default();
    for part in parts {
        let value = part.value("sum b^2/mu").unwrap_or(f64::NAN);
        if !value.is_nan() {
            worst.observe(-value, &part.scope);
        }
        match part.verdict {
            crate::Verdict::Pass => {}
            crate::Verdict::Fail => {
                for w in part.witnesses {
                    cert.fail(w);
                }
            }
            crate::Verdict::Inconclusive => cert.mark_inconclusive(part.reason.unwrap_or_default()),
        }
    }
    if worst.count > 0 {
        cert.push_value("max sum b^2/mu", -worst.min);
    }
    cert
}

/// Table-backed potential file: `{"values":{"id":v,...},"default":0.0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialDoc {
    pub values: BTreeMap<VertexId, f64>,
    #[serde(default)]
    pub default: Option<f64>,
}

impl PotentialDoc {
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn to_function(&self, name: &str) -> VertexFunction {
        VertexFunction::from_table(name, self.values.iter().map(|(k, v)| (k.clone(), *v)), self.default)
    }
}

/// Split file: `{"u":{"values":{...}},"w":{"values":{...}}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitDoc {
    pub u: PotentialDoc,
    pub w: PotentialDoc,
}

impl SplitDoc {
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn to_potential(&self) -> Potential {
        Potential::from_split(self.u.to_function("U"), self.w.to_function("W"))
    }
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

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn apply_delta_on_two_vertices() {
        let g = two_vertex();
        let f = CcFunction::delta(VertexId::Index(0));
        let v = Potential::zero();
        assert_eq!(apply_operator(&g, &v, &f, &VertexId::Index(0)).unwrap(), c(1.0));
        assert_eq!(apply_operator(&g, &v, &f, &VertexId::Index(1)).unwrap(), c(-1.0));
        assert_eq!(grad_squared(&g, &f, &VertexId::Index(0)).unwrap(), 1.0);
        assert_eq!(quadratic_form(&g, &VertexFunction::zero(), &f, &f).unwrap(), c(1.0));
    }

    #[test]
    fn constant_function_has_zero_gradient_and_form() {
        let g = two_vertex();
        let f = CcFunction::indicator([VertexId::Index(0), VertexId::Index(1)]).scale(c(3.0));
        for x in [VertexId::Index(0), VertexId::Index(1)] {
            assert_eq!(grad_squared(&g, &f, &x).unwrap(), 0.0);
        }
        assert_eq!(quadratic_form(&g, &VertexFunction::zero(), &f, &f).unwrap(), c(0.0));
    }

    #[test]
    fn delta_inner_products() {
        let g = FiniteGraph::new(vec![(VertexId::Index(0), 2.5), (VertexId::Index(1), 0.5)], vec![]).unwrap();
        let d0 = CcFunction::delta(VertexId::Index(0));
        let d1 = CcFunction::delta(VertexId::Index(1));
        assert_eq!(inner_product(&g, &d0, &d0).unwrap(), c(2.5));
        assert_eq!(inner_product(&g, &d0, &d1).unwrap(), c(0.0));
    }

    #[test]
    fn zero_function_green_values_vanish() {
        let g = two_vertex();
        let zero = CcFunction::new();
        let u = CcFunction::delta(VertexId::Index(1));
        let cert = check_green(&g, &VertexFunction::constant(2.0), &zero, &u, Tolerance::IDENTITY);
        assert!(cert.is_pass(), "{cert}");
        assert!(cert.values.iter().filter(|(n, _)| n != "term_mass").all(|(_, v)| *v == 0.0));
    }

    #[test]
    fn leibniz_with_deltas_and_constants() {
        let x = VertexId::Index(0);
        let y = VertexId::Index(1);
        let d = CcFunction::delta(x.clone());
        let cert = check_leibniz(&d, &d, &x, &y, 1e-14);
        assert!(cert.is_pass());
        let constant = CcFunction::indicator([x.clone(), y.clone()]).scale(Complex64::new(0.3, -2.0));
        let h = CcFunction::from_pairs([(x.clone(), Complex64::new(1.5, 0.25)), (y.clone(), Complex64::new(-0.5, 1.0))]);
        assert!(check_leibniz(&constant, &h, &x, &y, 1e-14).is_pass());
    }

    #[test]
    fn fc_isolated_vertex() {
        let g = FiniteGraph::new(vec![(VertexId::Index(0), 1.0)], vec![]).unwrap();
        let cert = check_fc(&g, &VertexId::Index(0));
        assert!(cert.is_pass());
        assert_eq!(cert.value("sum b^2/mu"), Some(0.0));
    }

    #[test]
    fn split_consistency() {
        let u = VertexFunction::constant(3.0);
        let w = VertexFunction::constant(1.0);
        let p = Potential::from_split(u, w);
        let scope = [VertexId::Index(0)];
        assert!(p.check_split(&scope, "x").is_pass());
        assert_eq!(p.at(&VertexId::Index(0)).unwrap(), 2.0);
        let bad = Potential::new(VertexFunction::constant(5.0)).with_split(VertexFunction::constant(-1.0), VertexFunction::zero());
        let cert = bad.check_split(&scope, "x");
        assert_eq!(cert.violations, 2);
    }

    #[test]
    fn cc_function_json() {
        let f: CcFunction = serde_json::from_str(r#"{"values":{"a":[1.0,-2.0],"3,1":[0.5,0]}}"#).unwrap();
        assert_eq!(f.get(&VertexId::label("a")), Complex64::new(1.0, -2.0));
        assert_eq!(f.get(&VertexId::Cell(3, 1)), c(0.5));
        let back: CcFunction = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
    }
}
