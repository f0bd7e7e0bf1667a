//! Shared corpus and brute-force oracles for the integration suites.
//!
//! The oracles are deliberately independent of the library's solvers: plain
//! grid search over `[-8, 8]` with step 1/64 plus one refinement pass, and a
//! scalar scan for the Luxemburg functional. They are slow and only used on
//! forms with at most three coordinate classes.

#![allow(dead_code)]

use std::collections::BTreeSet;

use reslab::convex::ScalarConvex;
use reslab::forms::{NetworkForm, VertexVector};
use reslab::ExtNonNeg;

pub const GRID_RANGE: f64 = 8.0;
pub const GRID_STEP: f64 = 1.0 / 64.0;

fn power(c: f64, p: f64) -> ScalarConvex {
    ScalarConvex::power(c, p).unwrap()
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn graph(names: &[&str], edges: &[(&str, &str, ScalarConvex)]) -> NetworkForm {
    NetworkForm::graph(
        labels(names),
        edges
            .iter()
            .map(|(u, v, w)| (u.to_string(), v.to_string(), w.clone()))
            .collect(),
    )
    .unwrap()
}

/// Ten named forms covering graphs, hypergraphs, mixed terms, caps, Dirichlet
/// constraints, identifications, and a disconnected instance.
pub fn corpus() -> Vec<(&'static str, NetworkForm)> {
    vec![
        ("edge-quadratic", graph(&["x", "y"], &[("x", "y", power(2.0, 2.0))])),
        ("edge-p1", graph(&["x", "y"], &[("x", "y", power(1.0, 1.0))])),
        ("edge-p15", graph(&["x", "y"], &[("x", "y", power(1.0, 1.5))])),
        ("edge-p3", graph(&["x", "y"], &[("x", "y", power(0.5, 3.0))])),
        (
            "edge-cosh",
            graph(
                &["x", "y"],
                &[("x", "y", ScalarConvex::cosh_minus_one(1.0).unwrap())],
            ),
        ),
        (
            "edge-capped",
            graph(
                &["x", "y"],
                &[("x", "y", ScalarConvex::capped(power(2.0, 2.0), 1.5).unwrap())],
            ),
        ),
        (
            "triangle-quadratic",
            graph(
                &["a", "b", "c"],
                &[
                    ("a", "b", power(2.0, 2.0)),
                    ("b", "c", power(1.0, 2.0)),
                    ("c", "a", power(0.5, 2.0)),
                ],
            ),
        ),
        (
            "path-p15",
            graph(
                &["a", "b", "c"],
                &[("a", "b", power(1.0, 1.5)), ("b", "c", power(2.0, 1.5))],
            ),
        ),
        (
            "hyper-three",
            NetworkForm::hypergraph(labels(&["a", "b", "c"]), vec![(labels(&["a", "b", "c"]), 0.7)])
                .unwrap(),
        ),
        (
            "mixed-hyper",
            NetworkForm::mixed(
                labels(&["a", "b", "c", "d"]),
                vec![
                    ("a".into(), "b".into(), power(1.0, 2.0)),
                    ("c".into(), "d".into(), power(1.0, 1.5)),
                ],
                vec![(labels(&["b", "c", "d"]), 0.4)],
            )
            .unwrap(),
        ),
        (
            "dirichlet-path",
            graph(
                &["a", "b", "c"],
                &[("a", "b", power(2.0, 2.0)), ("b", "c", power(2.0, 2.0))],
            )
            .restrict_dirichlet(&["c"])
            .unwrap(),
        ),
        (
            "identified-square",
            graph(
                &["a", "b", "c", "d"],
                &[
                    ("a", "b", power(2.0, 2.0)),
                    ("b", "c", power(2.0, 2.0)),
                    ("c", "d", power(2.0, 2.0)),
                    ("d", "a", power(2.0, 2.0)),
                ],
            )
            .identify(&[("a", "c")])
            .unwrap(),
        ),
        (
            "disconnected",
            graph(&["a", "b", "z"], &[("a", "b", power(2.0, 2.0))]),
        ),
    ]
}

/// Subset the grid oracles can afford.
pub fn small_corpus() -> Vec<(&'static str, NetworkForm)> {
    corpus()
        .into_iter()
        .filter(|(_, f)| f.class_count() <= 3)
        .collect()
}

fn energy(form: &NetworkForm, vals: Vec<f64>) -> ExtNonNeg {
    form.evaluate(&VertexVector::from_class_values(form, vals).unwrap()).unwrap()
}

/// Component index per class, derived from the public connectivity report.
fn component_of_class(form: &NetworkForm) -> Vec<usize> {
    let report = form.connectivity_report();
    let mut comp = vec![usize::MAX; form.class_count()];
    for (ci, group) in report.components.iter().enumerate() {
        for label in group {
            comp[form.class_of(label).unwrap()] = ci;
        }
    }
    comp
}

/// Grid layout: which classes vary, which sit pinned at 0.
///
/// Dirichlet classes are pinned. In every component without a Dirichlet class
/// the energy is shift invariant, so one class is pinned as a gauge; if the
/// objective has a nonzero coefficient sum over such a component the supremum
/// runs away along the constant shift and the oracle reports infinity.
struct GridPlan {
    free: Vec<usize>,
    unbounded: bool,
}

fn plan(form: &NetworkForm, l: &[f64]) -> GridPlan {
    let comp = component_of_class(form);
    let n = form.class_count();
    let dirichlet: BTreeSet<usize> = form
        .dirichlet_labels()
        .iter()
        .map(|d| form.class_of(d).unwrap())
        .collect();
    let n_comp = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut pinned_comp = vec![false; n_comp];
    for &d in &dirichlet {
        pinned_comp[comp[d]] = true;
    }
    for ci in 0..n_comp {
        if pinned_comp[ci] {
            continue;
        }
        let sum: f64 = (0..n).filter(|&c| comp[c] == ci).map(|c| l[c]).sum();
        if sum.abs() > 1e-12 {
            return GridPlan { free: Vec::new(), unbounded: true };
        }
    }
    let mut gauged = vec![false; n_comp];
    let mut free = Vec::new();
    for c in 0..n {
        if dirichlet.contains(&c) {
            continue;
        }
        if !pinned_comp[comp[c]] && !gauged[comp[c]] {
            // First class of an unpinned component carries the gauge.
            gauged[comp[c]] = true;
            continue;
        }
        free.push(c);
    }
    GridPlan { free, unbounded: false }
}

/// Exhaustive scan of `objective` over the free coordinates, all other
/// classes held at 0. Returns the best value and the best point.
///
/// Objective ties break toward smaller energy. For constrained objectives
/// the value is often flat across the feasible slice of a coordinate; the
/// minimum-energy point sits in the middle of that slice, which keeps the
/// true optimum inside the refinement box around the returned point.
fn scan(
    form: &NetworkForm,
    free: &[usize],
    center: &[f64],
    half_range: f64,
    step: f64,
    objective: &dyn Fn(ExtNonNeg, &[f64]) -> f64,
) -> (f64, Vec<f64>) {
    let n = form.class_count();
    let steps = (2.0 * half_range / step).round() as usize + 1;
    let mut point = vec![0.0; n];
    let mut best = (f64::NEG_INFINITY, f64::INFINITY, vec![0.0; n]);
    let mut idx = vec![0usize; free.len()];
    loop {
        for (k, &c) in free.iter().enumerate() {
            point[c] = (center[c] - half_range + idx[k] as f64 * step).clamp(-GRID_RANGE, GRID_RANGE);
        }
        let e = energy(form, point.clone());
        let v = objective(e, &point);
        if v > best.0 || (v == best.0 && e.to_float() < best.1) {
            best = (v, e.to_float(), point.clone());
        }
        // Odometer over the free dimensions.
        let mut k = 0;
        loop {
            if k == free.len() {
                return (best.0, best.2);
            }
            idx[k] += 1;
            if idx[k] < steps {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

pub struct GridResult {
    pub value: f64,
    /// Supremum ran away along a flat direction; no grid point to report.
    pub unbounded: bool,
    /// Best point sits on the grid wall: the box truncated the supremum.
    pub on_wall: bool,
}

fn optimize(
    form: &NetworkForm,
    l: &[f64],
    objective: impl Fn(ExtNonNeg, &[f64]) -> f64,
) -> GridResult {
    let plan = plan(form, l);
    if plan.unbounded {
        return GridResult { value: f64::INFINITY, unbounded: true, on_wall: false };
    }
    let zeros = vec![0.0; form.class_count()];
    let coarse = scan(form, &plan.free, &zeros, GRID_RANGE, GRID_STEP, &objective);
    let refined = scan(
        form,
        &plan.free,
        &coarse.1,
        GRID_STEP,
        GRID_STEP / 64.0,
        &objective,
    );
    let best = if refined.0 > coarse.0 { refined } else { coarse };
    let on_wall = plan
        .free
        .iter()
        .any(|&c| best.1[c].abs() >= GRID_RANGE - GRID_STEP);
    GridResult { value: best.0, unbounded: false, on_wall }
}

fn pair_tilt(form: &NetworkForm, x: &str, y: &str, t: f64) -> Vec<f64> {
    let mut l = vec![0.0; form.class_count()];
    l[form.class_of(x).unwrap()] += t;
    l[form.class_of(y).unwrap()] -= t;
    l
}

/// Brute-force `sup { f(x) - f(y) : E(f) <= 1 }`.
pub fn grid_resistance(form: &NetworkForm, x: &str, y: &str) -> GridResult {
    let l = pair_tilt(form, x, y, 1.0);
    optimize(form, &l, |e, point| match e {
        ExtNonNeg::Finite(v) if v <= 1.0 => {
            l.iter().zip(point).map(|(a, b)| a * b).sum()
        }
        _ => f64::NEG_INFINITY,
    })
}

/// Brute-force `sup { t (f(x) - f(y)) - E(f) }`.
pub fn grid_t_resistance(form: &NetworkForm, x: &str, y: &str, t: f64) -> GridResult {
    let l = pair_tilt(form, x, y, t);
    optimize(form, &l, |e, point| match e {
        ExtNonNeg::Finite(v) => {
            let lin: f64 = l.iter().zip(point).map(|(a, b)| a * b).sum();
            lin - v
        }
        ExtNonNeg::Infinite => f64::NEG_INFINITY,
    })
}

/// Scalar scan for `inf { lam > 0 : E(f / lam) <= 1 }`: coarse pass with the
/// grid step, one refinement pass, both over `(0, 16]`.
pub fn scan_luxemburg(form: &NetworkForm, f: &VertexVector) -> f64 {
    let feasible = |lam: f64| -> bool {
        let scaled: Vec<f64> = f.values().iter().map(|v| v / lam).collect();
        matches!(energy(form, scaled), ExtNonNeg::Finite(v) if v <= 1.0)
    };
    let coarse_hi = 2.0 * GRID_RANGE;
    let mut lam = GRID_STEP;
    while lam <= coarse_hi && !feasible(lam) {
        lam += GRID_STEP;
    }
    if lam > coarse_hi {
        return f64::INFINITY;
    }
    // E(f / lam) is nonincreasing in lam, so the boundary sits in the last
    // coarse step; walk it with the fine step.
    let mut fine = (lam - GRID_STEP).max(GRID_STEP / 64.0);
    while fine < lam && !feasible(fine) {
        fine += GRID_STEP / 64.0;
    }
    fine.min(lam)
}
