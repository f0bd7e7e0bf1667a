//! Network energies on finite labeled vertex sets.
//!
//! A [`NetworkForm`] is the convex functional
//!
//! ```text
//! E(f) = sum_edges w(f(u) - f(v)) + sum_hyperedges mu * (max_K f - min_K f)^2
//! ```
//!
//! over real vertex functions, optionally restricted by a Dirichlet set
//! (`E(f) = +inf` unless `f` vanishes there), with vertices merged into shared
//! coordinates by identification, and with an optional adjoined boundary
//! vertex. Functions and dual vectors live on *coordinate classes*: the
//! partition of vertices induced by identifications.
//!
//! Every energy term depends on coordinate differences only, so a form with an
//! empty Dirichlet set satisfies `E(f + K·1) = E(f)` exactly; this flat
//! direction is what the solver gauge-pins. Adjoining a boundary vertex
//! `Δ` turns the energy into `f ↦ E(f|_X - f(Δ))`; because the terms are
//! difference-based this equals the original energy except that Dirichlet
//! constraints become identifications with `Δ` (the constraint `f ≡ f(Δ)` on
//! the pinned set), which is exactly how it is stored.

use std::collections::{BTreeMap, BTreeSet};

use crate::convex::{eval_scalar, slope_select, ScalarConvex};
use crate::{Error, ExtNonNeg, Result};

/// An edge term `w(f(u) - f(v))`; each unordered pair is stored once.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: ScalarConvex,
}

/// A hyperedge term `mu * (max_K f - min_K f)^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperedge {
    pub vertices: Vec<usize>,
    pub mu: f64,
}

/// Convex network energy; see the module docs.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkForm {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    class_of: Vec<usize>,
    class_count: usize,
    edges: Vec<Edge>,
    hyperedges: Vec<Hyperedge>,
    dirichlet: BTreeSet<usize>,
    boundary: Option<usize>,
}

/// Real function on the coordinate classes of a form.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexVector {
    values: Vec<f64>,
}

/// Linear functional on the coordinate classes of a form.
#[derive(Debug, Clone, PartialEq)]
pub struct DualVector {
    values: Vec<f64>,
}

macro_rules! class_vector_impl {
    ($ty:ident) => {
        impl $ty {
            /// Wraps one value per coordinate class of `form`.
            pub fn from_class_values(form: &NetworkForm, values: Vec<f64>) -> Result<Self> {
                if values.len() != form.class_count {
                    return Err(Error::DimensionMismatch {
                        expected: form.class_count,
                        got: values.len(),
                    });
                }
                if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
                    return Err(Error::Parse(format!("non-finite coordinate value {bad}")));
                }
                Ok($ty { values })
            }

            /// Builds from per-vertex assignments. Every vertex must be
            /// covered and identified vertices must agree.
            pub fn from_labeled(form: &NetworkForm, assignments: &BTreeMap<String, f64>) -> Result<Self> {
                let mut values = vec![f64::NAN; form.class_count];
                for (label, &v) in assignments {
                    let i = form.vertex_index(label)?;
                    let c = form.class_of[i];
                    if values[c].is_nan() {
                        values[c] = v;
                    } else if values[c] != v {
                        return Err(Error::Parse(format!(
                            "identified vertex `{label}` assigned {v}, its class already has {}",
                            values[c]
                        )));
                    }
                }
                let covered = values.iter().filter(|v| !v.is_nan()).count();
                if covered != form.class_count {
                    return Err(Error::DimensionMismatch {
                        expected: form.class_count,
                        got: covered,
                    });
                }
                Self::from_class_values(form, values)
            }

            pub fn values(&self) -> &[f64] {
                &self.values
            }

            /// Value at a vertex label.
            pub fn value_at(&self, form: &NetworkForm, label: &str) -> Result<f64> {
                let i = form.vertex_index(label)?;
                Ok(self.values[form.class_of[i]])
            }
        }
    };
}

class_vector_impl!(VertexVector);
class_vector_impl!(DualVector);

impl DualVector {
    /// `t * (delta_x - delta_y)` on classes. Zero vector when `x ≡ y`.
    pub fn tilted_difference(form: &NetworkForm, x: &str, y: &str, t: f64) -> Result<Self> {
        let cx = form.class_of(x)?;
        let cy = form.class_of(y)?;
        let mut values = vec![0.0; form.class_count()];
        values[cx] += t;
        values[cy] -= t;
        Self::from_class_values(form, values)
    }

    /// `t * delta_x` on classes.
    pub fn tilted_point(form: &NetworkForm, x: &str, t: f64) -> Result<Self> {
        let cx = form.class_of(x)?;
        let mut values = vec![0.0; form.class_count()];
        values[cx] = t;
        Self::from_class_values(form, values)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Pairing against the all-ones function (one per class).
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Connected components of the support graph: vertices joined by edges with
/// `w ≢ 0`, hyperedges with `mu > 0`, and identifications.
///
/// For forms with an empty Dirichlet set, two vertices have finite elementary
/// resistance exactly when they lie in the same component.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectivityReport {
    pub components: Vec<Vec<String>>,
    pub connected: bool,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }
    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller root wins: keeps class numbering stable under rebuilds.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

impl NetworkForm {
    /// General constructor: labeled vertices, edge terms, hyperedge terms.
    pub fn mixed(
        vertices: Vec<String>,
        edges: Vec<(String, String, ScalarConvex)>,
        hyperedges: Vec<(Vec<String>, f64)>,
    ) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, label) in vertices.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::ConstructionError(format!("duplicate vertex label `{label}`")));
            }
        }
        let n = vertices.len();
        let mut form = NetworkForm {
            labels: vertices,
            index,
            class_of: (0..n).collect(),
            class_count: n,
            edges: Vec::new(),
            hyperedges: Vec::new(),
            dirichlet: BTreeSet::new(),
            boundary: None,
        };
        for (u, v, w) in edges {
            let ui = form.vertex_index(&u)?;
            let vi = form.vertex_index(&v)?;
            if ui == vi {
                return Err(Error::SelfLoop(u));
            }
            form.edges.push(Edge { u: ui, v: vi, w });
        }
        for (k, mu) in hyperedges {
            if !(mu.is_finite() && mu >= 0.0) {
                return Err(Error::ConstructionError(format!("hyperedge weight must be >= 0, got {mu}")));
            }
            let mut seen = BTreeSet::new();
            let mut idx = Vec::with_capacity(k.len());
            for label in &k {
                let i = form.vertex_index(label)?;
                if !seen.insert(i) {
                    return Err(Error::ConstructionError(format!(
                        "hyperedge repeats vertex `{label}`"
                    )));
                }
                idx.push(i);
            }
            if idx.len() < 2 {
                return Err(Error::SingletonHyperedge(idx.len()));
            }
            form.hyperedges.push(Hyperedge { vertices: idx, mu });
        }
        Ok(form)
    }

    /// Edge-only energy `sum w(f(u) - f(v))`.
    pub fn graph(vertices: Vec<String>, edges: Vec<(String, String, ScalarConvex)>) -> Result<Self> {
        Self::mixed(vertices, edges, Vec::new())
    }

    /// Hyperedge-only energy `sum mu (max_K f - min_K f)^2`.
    pub fn hypergraph(vertices: Vec<String>, hyperedges: Vec<(Vec<String>, f64)>) -> Result<Self> {
        Self::mixed(vertices, Vec::new(), hyperedges)
    }

    fn vertex_index(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    /// Coordinate class of a vertex label.
    pub fn class_of(&self, label: &str) -> Result<usize> {
        Ok(self.class_of[self.vertex_index(label)?])
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn hyperedges(&self) -> &[Hyperedge] {
        &self.hyperedges
    }

    pub fn dirichlet_labels(&self) -> Vec<String> {
        self.dirichlet.iter().map(|&i| self.labels[i].clone()).collect()
    }

    pub fn is_dirichlet_free(&self) -> bool {
        self.dirichlet.is_empty()
    }

    pub fn boundary_label(&self) -> Option<&str> {
        self.boundary.map(|i| self.labels[i].as_str())
    }

    /// Classes pinned to zero by the Dirichlet set.
    pub(crate) fn dirichlet_classes(&self) -> BTreeSet<usize> {
        self.dirichlet.iter().map(|&i| self.class_of[i]).collect()
    }

    /// Recomputes coordinate classes from an identification relation given as
    /// vertex-index pairs, renumbering classes by first vertex occurrence.
    fn rebuild_classes(&mut self, extra_pairs: &[(usize, usize)]) {
        let n = self.labels.len();
        let mut uf = UnionFind::new(n);
        // Existing classes stay merged.
        let mut first_in_class: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..n {
            let c = self.class_of[v];
            if let Some(&f) = first_in_class.get(&c) {
                uf.union(f, v);
            } else {
                first_in_class.insert(c, v);
            }
        }
        for &(a, b) in extra_pairs {
            uf.union(a, b);
        }
        let mut next = 0usize;
        let mut class_ids: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..n {
            let root = uf.find(v);
            let id = *class_ids.entry(root).or_insert_with(|| {
                let id = next;
                next += 1;
                id
            });
            self.class_of[v] = id;
        }
        self.class_count = next;
    }

    /// Merges the coordinates of each label pair.
    pub fn identify(&self, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut out = self.clone();
        let mut idx_pairs = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            idx_pairs.push((self.vertex_index(a)?, self.vertex_index(b)?));
        }
        out.rebuild_classes(&idx_pairs);
        Ok(out)
    }

    /// Pins the given vertices to zero: the result is `E` on functions
    /// vanishing there and `+inf` elsewhere. Unions with any existing pins.
    pub fn restrict_dirichlet(&self, labels: &[&str]) -> Result<Self> {
        let mut out = self.clone();
        for label in labels {
            let i = self.vertex_index(label)?;
            out.dirichlet.insert(i);
        }
        Ok(out)
    }

    /// Adjoins a boundary vertex `Δ` carrying the energy
    /// `f ↦ E(f|_X - f(Δ))`.
    ///
    /// The energy terms are difference-based, so the shift only acts through
    /// the Dirichlet set: pinned vertices turn into identifications with `Δ`
    /// (`f ≡ f(Δ)` there) and the result has no Dirichlet constraints. The
    /// elementary resistance from `x` to `Δ` in the result is the resistance
    /// to infinity of `x` in the original form.
    pub fn adjoin_boundary_point(&self) -> Result<Self> {
        if let Some(b) = self.boundary {
            return Err(Error::BoundaryAlreadyPresent(self.labels[b].clone()));
        }
        let mut label = "Δ".to_string();
        while self.index.contains_key(&label) {
            label.push('\'');
        }
        let mut out = self.clone();
        let b = out.labels.len();
        out.labels.push(label.clone());
        out.index.insert(label, b);
        out.class_of.push(out.class_count);
        out.class_count += 1;
        let pairs: Vec<(usize, usize)> = out.dirichlet.iter().map(|&d| (d, b)).collect();
        out.dirichlet.clear();
        out.rebuild_classes(&pairs);
        out.boundary = Some(b);
        Ok(out)
    }

    /// Evaluates `E(f)`. Infinite when a Dirichlet constraint is violated or
    /// an edge gap leaves a cap interval.
    pub fn evaluate(&self, f: &VertexVector) -> Result<ExtNonNeg> {
        self.check_dim(f.values.len())?;
        Ok(self.energy_raw(&f.values))
    }

    pub(crate) fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.class_count {
            return Err(Error::DimensionMismatch { expected: self.class_count, got });
        }
        Ok(())
    }

    /// Energy on a raw class-value slice (length assumed checked).
    pub(crate) fn energy_raw(&self, f: &[f64]) -> ExtNonNeg {
        for &d in &self.dirichlet {
            if f[self.class_of[d]] != 0.0 {
                return ExtNonNeg::Infinite;
            }
        }
        let mut total = 0.0;
        for e in &self.edges {
            let gap = f[self.class_of[e.u]] - f[self.class_of[e.v]];
            match eval_scalar(&e.w, gap) {
                ExtNonNeg::Finite(v) => total += v,
                ExtNonNeg::Infinite => return ExtNonNeg::Infinite,
            }
        }
        for h in &self.hyperedges {
            if h.mu == 0.0 {
                continue;
            }
            let (mx, mn) = self.hyperedge_range(h, f);
            let d = mx - mn;
            total += h.mu * d * d;
        }
        ExtNonNeg::from_float(total)
    }

    fn hyperedge_range(&self, h: &Hyperedge, f: &[f64]) -> (f64, f64) {
        let mut mx = f64::NEG_INFINITY;
        let mut mn = f64::INFINITY;
        for &v in &h.vertices {
            let val = f[self.class_of[v]];
            mx = mx.max(val);
            mn = mn.min(val);
        }
        (mx, mn)
    }

    /// Argmax/argmin positions of a hyperedge, ties broken by lowest vertex
    /// index (the subgradient selection convention).
    fn hyperedge_extremes(&self, h: &Hyperedge, f: &[f64]) -> (usize, usize) {
        let mut best_max = h.vertices[0];
        let mut best_min = h.vertices[0];
        for &v in &h.vertices[1..] {
            let val = f[self.class_of[v]];
            if val > f[self.class_of[best_max]] {
                best_max = v;
            }
            if val < f[self.class_of[best_min]] {
                best_min = v;
            }
        }
        (best_max, best_min)
    }

    /// A subgradient selection of `E` at `f`, as a dual vector on classes.
    ///
    /// Selection conventions: the `|·|` kink at 0 contributes slope 0, capped
    /// edges on the cap wall use the inner slope, hyperedge max/min ties
    /// resolve to the lowest vertex index. Errors with
    /// [`Error::InfiniteEnergy`] where `E(f) = +inf`.
    pub fn subgradient(&self, f: &VertexVector) -> Result<DualVector> {
        self.check_dim(f.values.len())?;
        if self.energy_raw(&f.values).is_infinite() {
            return Err(Error::InfiniteEnergy);
        }
        let mut g = vec![0.0; self.class_count];
        self.accumulate_subgradient(&f.values, &mut g);
        Ok(DualVector { values: g })
    }

    pub(crate) fn accumulate_subgradient(&self, f: &[f64], g: &mut [f64]) {
        for e in &self.edges {
            let (cu, cv) = (self.class_of[e.u], self.class_of[e.v]);
            let s = slope_select(&e.w, f[cu] - f[cv]);
            g[cu] += s;
            g[cv] -= s;
        }
        for h in &self.hyperedges {
            if h.mu == 0.0 {
                continue;
            }
            let (vmax, vmin) = self.hyperedge_extremes(h, f);
            let (cmax, cmin) = (self.class_of[vmax], self.class_of[vmin]);
            let d = 2.0 * h.mu * (f[cmax] - f[cmin]);
            g[cmax] += d;
            g[cmin] -= d;
        }
    }

    /// Evaluation for the solver: either the finite energy or a separating
    /// cut for the first term that is infinite at `f`. Dirichlet classes are
    /// assumed pinned by the caller.
    pub(crate) fn energy_or_cut(&self, f: &[f64]) -> std::result::Result<f64, Vec<f64>> {
        let mut total = 0.0;
        for e in &self.edges {
            let (cu, cv) = (self.class_of[e.u], self.class_of[e.v]);
            let gap = f[cu] - f[cv];
            match eval_scalar(&e.w, gap) {
                ExtNonNeg::Finite(v) => total += v,
                ExtNonNeg::Infinite => {
                    let mut cut = vec![0.0; self.class_count];
                    let s = gap.signum();
                    cut[cu] += s;
                    cut[cv] -= s;
                    return Err(cut);
                }
            }
        }
        for h in &self.hyperedges {
            if h.mu == 0.0 {
                continue;
            }
            let (mx, mn) = self.hyperedge_range(h, f);
            let d = mx - mn;
            total += h.mu * d * d;
        }
        Ok(total)
    }

    /// Support components; see [`ConnectivityReport`].
    pub fn connectivity_report(&self) -> ConnectivityReport {
        let n = self.labels.len();
        let mut uf = UnionFind::new(n);
        // Identified vertices share a coordinate: resistance 0.
        let mut first_in_class: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..n {
            match first_in_class.get(&self.class_of[v]) {
                Some(&f) => uf.union(f, v),
                None => {
                    first_in_class.insert(self.class_of[v], v);
                }
            }
        }
        for e in &self.edges {
            if !e.w.is_identically_zero() {
                uf.union(e.u, e.v);
            }
        }
        for h in &self.hyperedges {
            if h.mu > 0.0 {
                for w in h.vertices.windows(2) {
                    uf.union(w[0], w[1]);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for v in 0..n {
            groups.entry(uf.find(v)).or_default().push(self.labels[v].clone());
        }
        let components: Vec<Vec<String>> = groups.into_values().collect();
        let connected = components.len() <= 1;
        ConnectivityReport { components, connected }
    }

    /// Component id per coordinate class, numbered like the report.
    pub(crate) fn component_of_class(&self) -> Vec<usize> {
        let report = self.connectivity_report();
        let mut comp_of_class = vec![usize::MAX; self.class_count];
        for (ci, comp) in report.components.iter().enumerate() {
            for label in comp {
                let v = self.index[label];
                comp_of_class[self.class_of[v]] = ci;
            }
        }
        comp_of_class
    }
}

fn check_series_operand(form: &NetworkForm, side: &str) -> Result<()> {
    if !form.dirichlet.is_empty() {
        return Err(Error::DirichletOperand(format!(
            "{side} operand has Dirichlet vertices {:?}",
            form.dirichlet_labels()
        )));
    }
    if let Some(b) = form.boundary_label() {
        return Err(Error::DirichletOperand(format!(
            "{side} operand carries boundary vertex `{b}`"
        )));
    }
    Ok(())
}

/// Renaming applied to the second operand's labels in a series gluing:
/// labels colliding with the first operand (or with an earlier renamed label)
/// get primes appended, in declaration order.
fn second_operand_renaming(f1: &NetworkForm, f2: &NetworkForm) -> BTreeMap<String, String> {
    let mut taken: BTreeSet<String> = f1.labels.iter().cloned().collect();
    let mut renamed: BTreeMap<String, String> = BTreeMap::new();
    for l in &f2.labels {
        let mut name = l.clone();
        while taken.contains(&name) {
            name.push('\'');
        }
        taken.insert(name.clone());
        renamed.insert(l.clone(), name);
    }
    renamed
}

/// The label a vertex of `f2` carries inside `series_identify(f1, .., f2, ..)`
/// or `series_resistor(f1, .., f2, ..)` output.
pub fn relabeled_in_series(f1: &NetworkForm, f2: &NetworkForm, label: &str) -> Result<String> {
    f2.vertex_index(label)?;
    Ok(second_operand_renaming(f1, f2).remove(label).expect("renaming covers every label"))
}

/// Disjoint union of two forms; colliding labels of the second operand get
/// primes appended. Returns the merged pieces plus the second operand's
/// relabeled `xi2`.
fn merge_vertex_sets(
    f1: &NetworkForm,
    f2: &NetworkForm,
    xi1: &str,
    xi2: &str,
) -> Result<(NetworkForm, String)> {
    f1.vertex_index(xi1)?;
    f2.vertex_index(xi2)?;
    check_series_operand(f1, "first")?;
    check_series_operand(f2, "second")?;

    let renamed = second_operand_renaming(f1, f2);
    let mut labels = f1.labels.clone();
    labels.extend(f2.labels.iter().map(|l| renamed[l].clone()));

    let rename = |l: &String| renamed[l].clone();
    let mut edges: Vec<(String, String, ScalarConvex)> = f1
        .edges
        .iter()
        .map(|e| (f1.labels[e.u].clone(), f1.labels[e.v].clone(), e.w.clone()))
        .collect();
    edges.extend(f2.edges.iter().map(|e| {
        (rename(&f2.labels[e.u]), rename(&f2.labels[e.v]), e.w.clone())
    }));
    let mut hyperedges: Vec<(Vec<String>, f64)> = f1
        .hyperedges
        .iter()
        .map(|h| (h.vertices.iter().map(|&v| f1.labels[v].clone()).collect(), h.mu))
        .collect();
    hyperedges.extend(f2.hyperedges.iter().map(|h| {
        (h.vertices.iter().map(|&v| rename(&f2.labels[v])).collect(), h.mu)
    }));

    let mut merged = NetworkForm::mixed(labels, edges, hyperedges)?;
    // Carry over identifications from both operands.
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (form, offset) in [(f1, 0usize), (f2, f1.labels.len())] {
        let mut first_in_class: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..form.labels.len() {
            match first_in_class.get(&form.class_of[v]) {
                Some(&f) => pairs.push((f + offset, v + offset)),
                None => {
                    first_in_class.insert(form.class_of[v], v);
                }
            }
        }
    }
    merged.rebuild_classes(&pairs);
    Ok((merged, renamed[xi2].clone()))
}

/// Glues two forms in series by identifying `xi1 ≡ xi2`: the sum energy on the
/// disjoint union with the two gluing vertices sharing a coordinate.
///
/// Operands must be free of Dirichlet constraints and boundary vertices
/// (constants must lie in both kernels for series additivity to hold).
pub fn series_identify(
    f1: &NetworkForm,
    xi1: &str,
    f2: &NetworkForm,
    xi2: &str,
) -> Result<NetworkForm> {
    let (merged, xi2_new) = merge_vertex_sets(f1, f2, xi1, xi2)?;
    merged.identify(&[(xi1, &xi2_new)])
}

/// Glues two forms through a quadratic connector `(1/(4 eps)) (f(xi1) - f(xi2))^2`
/// instead of identification; `eps > 0`.
pub fn series_resistor(
    f1: &NetworkForm,
    xi1: &str,
    f2: &NetworkForm,
    xi2: &str,
    eps: f64,
) -> Result<NetworkForm> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::NonPositiveEpsilon(eps));
    }
    let (mut merged, xi2_new) = merge_vertex_sets(f1, f2, xi1, xi2)?;
    let u = merged.vertex_index(xi1)?;
    let v = merged.vertex_index(&xi2_new)?;
    merged.edges.push(Edge {
        u,
        v,
        w: ScalarConvex::power(1.0 / (2.0 * eps), 2.0)?,
    });
    Ok(merged)
}
