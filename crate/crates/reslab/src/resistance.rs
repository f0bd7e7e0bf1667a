//! Resistance quantities and modular functionals of a network energy.
//!
//! Everything here reduces to convex solves or scalar bisections:
//!
//! * elementary resistance `R(x, y) = sup { f(x) - f(y) : E(f) <= 1 }` and its
//!   point-at-infinity variant;
//! * tilted resistance `Rt(x, y) = sup { t (f(x) - f(y)) - E(f) }`, which is
//!   the convex conjugate of the energy at `t (delta_x - delta_y)`;
//! * the conjugate `E*(phi)` itself;
//! * the Luxemburg functional `inf { lam > 0 : E(f / lam) <= 1 }` by scalar
//!   bisection on the monotone map `lam -> E(f / lam)`;
//! * the Orlicz functional through the scaling identity
//!   `sup { <phi, f> : E*(phi) <= 1 } = inf_{k > 0} (1 + E(k f)) / k`
//!   (strong duality of the one-constraint Lagrangian; `E*(0) = 0 < 1` gives
//!   a Slater point), reducing a nested dual optimization to one scalar
//!   bisection on the slope criterion `k <d, f> - 1 - E(k f)`, `d` a
//!   subgradient of `E` at `k f`;
//! * the penalized approximants
//!   `inf_g { E(g) + alpha * sum_{x in K} |f(x) - g(x)|^p }`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::ext::ExtNonNeg;
use crate::forms::{DualVector, NetworkForm, VertexVector};
use crate::solver::{
    self, localize_min, ExtReal, Oracle, Probe, Reduction, SolveConfig,
    SolveOutcome, SolveStatus,
};
use crate::{Error, Result};

/// Default ceiling on coordinate classes for the Orlicz functional.
pub const ORLICZ_CLASS_CAP: usize = 6;

/// A computed quantity with solve diagnostics. `status` is `MaxIters` when
/// any underlying solve ran out of budget (the value is then best-effort).
#[derive(Debug, Clone, PartialEq)]
pub struct Quantity {
    pub value: ExtNonNeg,
    pub status: SolveStatus,
    pub iterations: usize,
}

impl Quantity {
    fn exact(value: ExtNonNeg) -> Self {
        Quantity { value, status: SolveStatus::Converged, iterations: 0 }
    }

    pub fn budget_exhausted(&self) -> bool {
        self.status == SolveStatus::MaxIters
    }
}

/// Maps a sup-type solve (value is a supremum, never below 0).
fn from_sup(out: SolveOutcome) -> Quantity {
    let value = match out.value {
        ExtReal::Finite(v) => ExtNonNeg::finite(v.max(0.0)),
        ExtReal::PlusInf => ExtNonNeg::Infinite,
        // A supremum over a set containing 0 cannot be -inf.
        ExtReal::MinusInf => ExtNonNeg::finite(0.0),
    };
    Quantity { value, status: out.status, iterations: out.iterations }
}

/// Maps a minimization of `E - linear` to the conjugate-style value
/// `max(0, -min)`; `Unbounded` below means the supremum is infinite.
fn from_neg_min(out: SolveOutcome) -> Quantity {
    let value = match out.value {
        ExtReal::Finite(v) => ExtNonNeg::finite((-v).max(0.0)),
        ExtReal::MinusInf => ExtNonNeg::Infinite,
        // E(0) = 0 keeps every such problem feasible.
        ExtReal::PlusInf => ExtNonNeg::finite(0.0),
    };
    Quantity { value, status: out.status, iterations: out.iterations }
}

/// `R(x, y) = sup { f(x) - f(y) : E(f) <= 1 }`; 0 when `x` and `y` are equal
/// or identified, `+inf` when no finite-energy function separates them.
pub fn elementary_resistance(
    form: &NetworkForm,
    x: &str,
    y: &str,
    cfg: &SolveConfig,
) -> Result<Quantity> {
    if form.class_of(x)? == form.class_of(y)? {
        return Ok(Quantity::exact(ExtNonNeg::finite(0.0)));
    }
    let l = DualVector::tilted_difference(form, x, y, 1.0)?;
    Ok(from_sup(solver::sup_linear_over_sublevel(form, &l, cfg)?))
}

/// `R_inf(x) = sup { f(x) : E(f) <= 1 }`. Infinite whenever constants are
/// flat on the component of `x` (no Dirichlet pin there).
pub fn resistance_to_infinity(form: &NetworkForm, x: &str, cfg: &SolveConfig) -> Result<Quantity> {
    let l = DualVector::tilted_point(form, x, 1.0)?;
    Ok(from_sup(solver::sup_linear_over_sublevel(form, &l, cfg)?))
}

/// `Rt(x, y) = sup_f { t (f(x) - f(y)) - E(f) }` for `t > 0`.
pub fn t_resistance(
    form: &NetworkForm,
    x: &str,
    y: &str,
    t: f64,
    cfg: &SolveConfig,
) -> Result<Quantity> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::NonPositiveT(t));
    }
    if form.class_of(x)? == form.class_of(y)? {
        return Ok(Quantity::exact(ExtNonNeg::finite(0.0)));
    }
    let l = DualVector::tilted_difference(form, x, y, t)?;
    Ok(from_neg_min(solver::minimize_composite(form, &l, &[], cfg)?))
}

/// `Rt_inf(x) = sup_f { t f(x) - E(f) }` for `t > 0`. Infinite whenever the
/// component of `x` has no Dirichlet pin (detected without solving).
pub fn t_resistance_to_infinity(
    form: &NetworkForm,
    x: &str,
    t: f64,
    cfg: &SolveConfig,
) -> Result<Quantity> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::NonPositiveT(t));
    }
    let l = DualVector::tilted_point(form, x, t)?;
    Ok(from_neg_min(solver::minimize_composite(form, &l, &[], cfg)?))
}

/// Convex conjugate `E*(phi) = sup_f { <phi, f> - E(f) }`.
///
/// Finiteness requires `phi` to sum to zero over every support component that
/// has no Dirichlet pin; violations return `+inf` without iterating.
pub fn conjugate(form: &NetworkForm, phi: &DualVector, cfg: &SolveConfig) -> Result<Quantity> {
    Ok(from_neg_min(solver::minimize_composite(form, phi, &[], cfg)?))
}

fn scaled_vector(form: &NetworkForm, f: &VertexVector, k: f64) -> VertexVector {
    VertexVector::from_class_values(form, f.values().iter().map(|v| v * k).collect())
        .expect("scaling preserves dimension and finiteness")
}

/// Luxemburg functional `inf { lam > 0 : E(f / lam) <= 1 }`.
///
/// `lam -> E(f / lam)` is nonincreasing (convexity and `E(0) = 0`), so a
/// bracket plus bisection suffices. If the sublevel condition holds for every
/// probed `lam` down to `tol_abs`, the infimum is reported as 0; if it fails
/// up to `divergence_norm_bound` (a Dirichlet-violating `f`), the result is
/// `+inf`.
pub fn luxemburg(form: &NetworkForm, f: &VertexVector, cfg: &SolveConfig) -> Result<Quantity> {
    form.evaluate(f)?; // dimension check
    if f.values().iter().all(|v| *v == 0.0) {
        return Ok(Quantity::exact(ExtNonNeg::finite(0.0)));
    }
    let modular = |lam: f64| -> f64 {
        form.energy_raw(scaled_vector(form, f, 1.0 / lam).values()).to_float()
    };
    let growth = cfg.bisection_bracket_growth.max(1.5);
    let mut iterations = 0usize;

    let mut hi = 1.0;
    while modular(hi) > 1.0 {
        iterations += 1;
        hi *= growth;
        if hi > cfg.divergence_norm_bound {
            return Ok(Quantity {
                value: ExtNonNeg::Infinite,
                status: SolveStatus::Converged,
                iterations,
            });
        }
    }
    let mut lo = hi;
    loop {
        iterations += 1;
        lo /= growth;
        if lo < cfg.tol_abs {
            return Ok(Quantity {
                value: ExtNonNeg::finite(0.0),
                status: SolveStatus::Converged,
                iterations,
            });
        }
        if modular(lo) > 1.0 {
            break;
        }
        hi = lo;
    }
    while hi - lo > cfg.tol_abs + cfg.tol_rel * hi {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if modular(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Quantity {
        value: ExtNonNeg::finite(0.5 * (lo + hi)),
        status: SolveStatus::Converged,
        iterations,
    })
}

/// Orlicz functional `sup { <phi, f> : E*(phi) <= 1 }` with the default
/// class-count cap.
pub fn orlicz(form: &NetworkForm, f: &VertexVector, cfg: &SolveConfig) -> Result<Quantity> {
    orlicz_capped(form, f, ORLICZ_CLASS_CAP, cfg)
}

/// Orlicz functional with an explicit class-count cap.
///
/// Computed through `inf_{k > 0} (1 + E(k f)) / k`, equal to the dual sup by
/// Lagrangian duality. The infimand is unimodal in `k` and its optimality
/// criterion `s(k) = k <d, f> - 1 - E(k f)` (with `d` a subgradient of `E` at
/// `k f`) is nondecreasing, so one bracket-and-bisection run localizes the
/// optimal scale; hard caps enter as `E(k f) = +inf` walls on the right.
pub fn orlicz_capped(
    form: &NetworkForm,
    f: &VertexVector,
    cap: usize,
    cfg: &SolveConfig,
) -> Result<Quantity> {
    if form.class_count() > cap {
        return Err(Error::TooLarge { got: form.class_count(), cap });
    }
    form.evaluate(f)?;
    if f.values().iter().all(|v| *v == 0.0) {
        return Ok(Quantity::exact(ExtNonNeg::finite(0.0)));
    }
    // Nonzero on a Dirichlet class: E(k f) = +inf for every k > 0, and dual
    // vectors can push on that coordinate for free, so the sup is infinite.
    for c in form.dirichlet_classes() {
        if f.values()[c] != 0.0 {
            return Ok(Quantity::exact(ExtNonNeg::Infinite));
        }
    }

    let mut iterations = 0usize;
    let mut best_h = f64::INFINITY;
    // Returns the slope criterion, +inf past a cap wall; tracks the best
    // objective value seen.
    let mut slope = |k: f64| -> f64 {
        iterations += 1;
        let kf = scaled_vector(form, f, k);
        match form.energy_raw(kf.values()) {
            ExtNonNeg::Infinite => f64::INFINITY,
            ExtNonNeg::Finite(e) => {
                best_h = best_h.min((1.0 + e) / k);
                let mut g = vec![0.0; form.class_count()];
                form.accumulate_subgradient(kf.values(), &mut g);
                let d: f64 = g.iter().zip(f.values()).map(|(a, b)| a * b).sum();
                k * d - 1.0 - e
            }
        }
    };

    let growth = cfg.bisection_bracket_growth.max(1.5);
    let k_cap = 1e13; // past this, (1 + E(kf))/k is within 1e-13 of its limit
    let mut lo = 1e-12;
    let mut hi = 1.0;
    if slope(lo) >= 0.0 {
        // Optimal scale below any practical k; the limit value is 1/k -> inf
        // of the modular part, approached from above.
        lo = 1e-16;
    }
    loop {
        if slope(hi) >= 0.0 {
            break;
        }
        lo = hi;
        hi *= growth;
        if hi > k_cap {
            // One-homogeneous tail: the infimum is the k -> inf limit,
            // already captured by best_h at the last probe.
            return Ok(Quantity {
                value: ExtNonNeg::finite(best_h.max(0.0)),
                status: SolveStatus::Converged,
                iterations,
            });
        }
    }
    for _ in 0..200 {
        if hi - lo <= 1e-13 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if slope(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    slope(lo); // ensure the feasible endpoint's value enters best_h
    Ok(Quantity {
        value: ExtNonNeg::finite(best_h.max(0.0)),
        status: SolveStatus::Converged,
        iterations,
    })
}

struct PenalizedOracle<'a> {
    form: &'a NetworkForm,
    red: Reduction,
    /// (class, multiplicity, target value) per penalized coordinate class.
    penalty: Vec<(usize, f64, f64)>,
    alpha: f64,
    p_pen: f64,
}

impl Oracle for PenalizedOracle<'_> {
    fn dim(&self) -> usize {
        self.red.dim()
    }

    fn probe(&self, x: &[f64]) -> Probe {
        let full = self.red.embed(x);
        match self.form.energy_or_cut(&full) {
            Err(cut) => Probe::Cut { g: self.red.pull_back(&cut) },
            Ok(e) => {
                let mut v = e;
                let mut g_full = vec![0.0; full.len()];
                self.form.accumulate_subgradient(&full, &mut g_full);
                for &(c, mult, target) in &self.penalty {
                    let gap = target - full[c];
                    v += self.alpha * mult * gap.abs().powf(self.p_pen);
                    if gap != 0.0 {
                        g_full[c] -= self.alpha
                            * mult
                            * self.p_pen
                            * gap.abs().powf(self.p_pen - 1.0)
                            * gap.signum();
                    }
                }
                Probe::Val { v, g: self.red.pull_back(&g_full) }
            }
        }
    }
}

/// Approximating functional
/// `inf_g { E(g) + alpha * sum_{x in K} |f(x) - g(x)|^{p_pen} }`.
///
/// Always finite (`g = 0` is feasible). Duplicate labels in `k_set` count
/// once; identified vertices listed separately keep their multiplicity.
pub fn approximating_form(
    form: &NetworkForm,
    alpha: f64,
    k_set: &[&str],
    p_pen: f64,
    f: &VertexVector,
    cfg: &SolveConfig,
) -> Result<Quantity> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::NonPositiveAlpha(alpha));
    }
    if !(p_pen >= 1.0) || !p_pen.is_finite() {
        return Err(Error::ConstructionError(format!(
            "penalty exponent must be >= 1, got {p_pen}"
        )));
    }
    if k_set.is_empty() {
        return Err(Error::ConstructionError("penalty set must be nonempty".into()));
    }
    form.evaluate(f)?;
    let vertices: BTreeSet<&str> = k_set.iter().copied().collect();
    let mut per_class: BTreeMap<usize, f64> = BTreeMap::new();
    for v in vertices {
        *per_class.entry(form.class_of(v)?).or_insert(0.0) += 1.0;
    }
    let penalty: Vec<(usize, f64, f64)> = per_class
        .into_iter()
        .map(|(c, mult)| (c, mult, f.values()[c]))
        .collect();

    let n = form.class_count();
    let mut pin_value: Vec<Option<f64>> = vec![None; n];
    for c in form.dirichlet_classes() {
        pin_value[c] = Some(0.0);
    }
    // Components anchored by neither a Dirichlet pin nor a penalty term are
    // flat; gauge one class each.
    let comp = form.component_of_class();
    let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut anchored = vec![false; ncomp];
    for (c, pv) in pin_value.iter().enumerate() {
        if pv.is_some() {
            anchored[comp[c]] = true;
        }
    }
    for &(c, _, _) in &penalty {
        anchored[comp[c]] = true;
    }
    for comp_id in 0..ncomp {
        if !anchored[comp_id] {
            let c = (0..n).find(|&c| comp[c] == comp_id).expect("component is nonempty");
            pin_value[c] = Some(0.0);
        }
    }

    let target_scale = penalty.iter().map(|(_, _, t)| t.abs()).fold(0.0_f64, f64::max);
    let red = Reduction::new(n, pin_value, None);
    let r0 = 16.0 + 4.0 * (1.0 + target_scale + solver::cap_span(form));
    let oracle = PenalizedOracle { form, red, penalty, alpha, p_pen };
    let loc = localize_min(&oracle, r0, cfg);
    let value = match loc.value {
        ExtReal::Finite(v) => ExtNonNeg::finite(v.max(0.0)),
        // g = 0 is feasible with finite value and the objective is >= 0, so
        // neither infinity can genuinely occur.
        ExtReal::PlusInf => ExtNonNeg::Infinite,
        ExtReal::MinusInf => ExtNonNeg::finite(0.0),
    };
    Ok(Quantity { value, status: loc.status, iterations: loc.iterations })
}

/// Which quantity a [`ResistanceMatrix`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatrixKind {
    Elementary,
    TResistance { t: f64 },
}

/// All ordered-pair resistances of a form. Diagonal entries are exactly 0;
/// identified vertices are 0 apart.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResistanceMatrix {
    pub labels: Vec<String>,
    #[serde(flatten)]
    pub kind: MatrixKind,
    pub entries: Vec<Vec<ExtNonNeg>>,
    /// True when any entry's solve exhausted its budget.
    pub budget_exhausted: bool,
}

/// Computes every ordered pair. For Dirichlet-free forms, pairs in different
/// support components short-circuit to `+inf` without solving (no
/// finite-energy function separates the components at finite cost). Entries
/// are memoized per coordinate-class pair, so identified vertices reuse one
/// solve.
pub fn resistance_matrix(
    form: &NetworkForm,
    kind: MatrixKind,
    cfg: &SolveConfig,
) -> Result<ResistanceMatrix> {
    if let MatrixKind::TResistance { t } = kind {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::NonPositiveT(t));
        }
    }
    let labels: Vec<String> = form.vertex_labels().to_vec();
    let comp = form.component_of_class();
    let free = form.is_dirichlet_free();
    let mut cache: BTreeMap<(usize, usize), Quantity> = BTreeMap::new();
    let mut budget_exhausted = false;
    let mut entries = Vec::with_capacity(labels.len());
    for x in &labels {
        let cx = form.class_of(x)?;
        let mut row = Vec::with_capacity(labels.len());
        for y in &labels {
            let cy = form.class_of(y)?;
            if cx == cy {
                row.push(ExtNonNeg::finite(0.0));
                continue;
            }
            if free && comp[cx] != comp[cy] {
                row.push(ExtNonNeg::Infinite);
                continue;
            }
            let q = match cache.get(&(cx, cy)) {
                Some(q) => q.clone(),
                None => {
                    let q = match kind {
                        MatrixKind::Elementary => elementary_resistance(form, x, y, cfg)?,
                        MatrixKind::TResistance { t } => t_resistance(form, x, y, t, cfg)?,
                    };
                    cache.insert((cx, cy), q.clone());
                    q
                }
            };
            budget_exhausted |= q.budget_exhausted();
            row.push(q.value);
        }
        entries.push(row);
    }
    Ok(ResistanceMatrix { labels, kind, entries, budget_exhausted })
}
