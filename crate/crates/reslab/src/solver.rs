//! Convex minimization over network energies.
//!
//! The problems this crate needs are tiny (at most a dozen coordinate classes)
//! but nonsmooth: `|t|` kinks, hyperedge max/min terms, and hard cap walls.
//! The workhorse is a cutting localization scheme over a growing ball:
//!
//! * one free coordinate: interval bisection driven by subgradient signs and
//!   feasibility cuts;
//! * two or more: a central-cut ellipsoid with subgradient cuts for finite
//!   probes and separating cuts where the energy is infinite.
//!
//! Both maintain a certified lower bound (`f(c) - sqrt(g' P g)` over the
//! current localizer, which always contains a ball-constrained minimizer), so
//! `Converged` means the best value is within
//! `tol_abs + tol_rel * (1 + |value|)` of the ball optimum. The ball grows
//! geometrically until a growth step stops improving the value; persistent
//! improvement past the divergence bounds reports `Unbounded`.
//!
//! Flat directions are handled analytically, not iteratively: every energy
//! term depends on coordinate differences inside one support component, so a
//! component without pinned classes is flat under constant shifts. Per
//! component, a linear tilt with nonzero sum means the objective is unbounded;
//! a zero sum means the shift is a gauge and one class gets pinned to 0.

use crate::forms::{DualVector, NetworkForm, VertexVector};
use crate::{Error, Result};

/// Solver knobs. `Default` gives the documented values.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    /// Relative part of the optimality-gap target.
    pub tol_rel: f64,
    /// Absolute floor of the optimality-gap target.
    pub tol_abs: f64,
    /// Probe budget per solve call.
    pub max_iters: usize,
    /// Ball radius beyond which persistent improvement means unbounded.
    pub divergence_norm_bound: f64,
    /// Objective value below which the problem is declared unbounded.
    pub divergence_value_bound: f64,
    /// Geometric growth factor for balls and sup-side brackets.
    pub bisection_bracket_growth: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            tol_rel: 1e-8,
            tol_abs: 1e-10,
            max_iters: 100_000,
            divergence_norm_bound: 1e9,
            divergence_value_bound: 1e12,
            bisection_bracket_growth: 2.0,
        }
    }
}

impl SolveConfig {
    fn gap_tol(&self, value: f64) -> f64 {
        self.tol_abs + self.tol_rel * (1.0 + value.abs())
    }
}

/// How a solve ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Optimality gap certified within tolerance.
    Converged,
    /// Objective decreases without bound.
    Unbounded,
    /// Probe budget exhausted; the reported value is the best found.
    MaxIters,
}

/// A real extended by both infinities. Minimization values live here:
/// `PlusInf` is an infeasible problem, `MinusInf` an unbounded one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    PlusInf,
    MinusInf,
}

impl ExtReal {
    pub fn as_finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn to_float(self) -> f64 {
        match self {
            ExtReal::Finite(v) => v,
            ExtReal::PlusInf => f64::INFINITY,
            ExtReal::MinusInf => f64::NEG_INFINITY,
        }
    }
}

/// Result of one solver-level operation.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub value: ExtReal,
    /// Best point found, on coordinate classes; absent for unbounded or
    /// infeasible problems.
    pub argopt: Option<VertexVector>,
    pub status: SolveStatus,
    /// Oracle probes and cut steps consumed.
    pub iterations: usize,
}

pub(crate) enum Probe {
    /// Finite objective value with a subgradient.
    Val { v: f64, g: Vec<f64> },
    /// Objective infinite; `g` separates the probe from the feasible side.
    Cut { g: Vec<f64> },
}

pub(crate) trait Oracle {
    fn dim(&self) -> usize;
    fn probe(&self, x: &[f64]) -> Probe;
}

pub(crate) struct Localized {
    pub value: ExtReal,
    pub x: Option<Vec<f64>>,
    pub status: SolveStatus,
    pub iterations: usize,
}

struct StageOut {
    best: Option<(Vec<f64>, f64)>,
    certified: bool,
}

fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// One localization pass over the ball `B(0, r)`.
fn stage_min(oracle: &dyn Oracle, r: f64, cfg: &SolveConfig, used: &mut usize) -> StageOut {
    if oracle.dim() == 1 {
        return stage_min_1d(oracle, r, cfg, used);
    }
    let m = oracle.dim();
    let mf = m as f64;
    let mut c = vec![0.0; m];
    // P starts as r^2 * I: the initial ellipsoid is the ball itself.
    let mut p: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { r * r } else { 0.0 }).collect())
        .collect();
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut lb = f64::NEG_INFINITY;

    while *used < cfg.max_iters {
        *used += 1;
        // Collapsed localizer: nothing left to distinguish.
        let max_diag = (0..m).map(|i| p[i][i]).fold(0.0_f64, f64::max);
        if !(max_diag > 1e-26 * (1.0 + r * r)) {
            return StageOut { certified: best.is_some(), best };
        }

        let g_raw: Vec<f64> = if norm2(&c) > r * r {
            c.clone() // ball cut: keeps B(0, r)
        } else {
            match oracle.probe(&c) {
                Probe::Cut { g } => g,
                Probe::Val { v, g } => {
                    if best.as_ref().map_or(true, |(_, bv)| v < *bv) {
                        best = Some((c.clone(), v));
                    }
                    // Lower bound over the localizer, which still contains a
                    // ball minimizer: f >= f(c) - sqrt(g' P g).
                    let pg: Vec<f64> = (0..m).map(|i| {
                        (0..m).map(|j| p[i][j] * g[j]).sum()
                    }).collect();
                    let q: f64 = g.iter().zip(&pg).map(|(a, b)| a * b).sum();
                    if q.is_finite() && q >= 0.0 {
                        lb = lb.max(v - q.sqrt());
                    }
                    let bv = best.as_ref().unwrap().1;
                    if bv - lb <= cfg.gap_tol(bv) {
                        return StageOut { best, certified: true };
                    }
                    g
                }
            }
        };

        // Normalize the cut: direction is all that matters, and raw slopes
        // can overflow quadratic forms.
        let gmax = g_raw.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        if !(gmax > 0.0) || !gmax.is_finite() {
            // Zero cut: the infeasibility or flatness does not depend on x.
            return StageOut { certified: best.is_some(), best };
        }
        let g: Vec<f64> = g_raw.iter().map(|v| v / gmax).collect();

        let pg: Vec<f64> = (0..m).map(|i| (0..m).map(|j| p[i][j] * g[j]).sum()).collect();
        let q: f64 = g.iter().zip(&pg).map(|(a, b)| a * b).sum();
        if !(q > 0.0) || !q.is_finite() {
            return StageOut { certified: best.is_some(), best };
        }
        let denom = q.sqrt();
        for i in 0..m {
            c[i] -= pg[i] / ((mf + 1.0) * denom);
        }
        let f1 = mf * mf / (mf * mf - 1.0);
        let f2 = 2.0 / (mf + 1.0);
        for i in 0..m {
            for j in 0..m {
                p[i][j] = f1 * (p[i][j] - f2 * pg[i] * pg[j] / q);
            }
        }
        // Resymmetrize: rank-one updates drift.
        for i in 0..m {
            for j in (i + 1)..m {
                let s = 0.5 * (p[i][j] + p[j][i]);
                p[i][j] = s;
                p[j][i] = s;
            }
        }
    }
    StageOut { best, certified: false }
}

fn stage_min_1d(oracle: &dyn Oracle, r: f64, cfg: &SolveConfig, used: &mut usize) -> StageOut {
    let (mut lo, mut hi) = (-r, r);
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut lb = f64::NEG_INFINITY;
    while *used < cfg.max_iters {
        *used += 1;
        if hi - lo < 1e-15 * (1.0 + r) {
            return StageOut { certified: best.is_some(), best };
        }
        let c = 0.5 * (lo + hi);
        let slope = match oracle.probe(&[c]) {
            Probe::Cut { g } => g[0],
            Probe::Val { v, g } => {
                if best.as_ref().map_or(true, |(_, bv)| v < *bv) {
                    best = Some((vec![c], v));
                }
                let spread = (c - lo).max(hi - c);
                lb = lb.max(v - g[0].abs() * spread);
                let bv = best.as_ref().unwrap().1;
                if bv - lb <= cfg.gap_tol(bv) {
                    return StageOut { best, certified: true };
                }
                g[0]
            }
        };
        if slope > 0.0 {
            hi = c;
        } else if slope < 0.0 {
            lo = c;
        } else {
            // Zero subgradient at a finite probe: exact minimizer. A zero
            // *cut* would mean an x-independent infeasibility.
            return StageOut { certified: best.is_some(), best };
        }
    }
    StageOut { best, certified: false }
}

/// Minimizes the oracle objective over `R^dim` by staged ball growth.
pub(crate) fn localize_min(oracle: &dyn Oracle, r0: f64, cfg: &SolveConfig) -> Localized {
    let mut used = 0usize;
    if oracle.dim() == 0 {
        used += 1;
        return match oracle.probe(&[]) {
            Probe::Val { v, .. } => Localized {
                value: ExtReal::Finite(v),
                x: Some(Vec::new()),
                status: SolveStatus::Converged,
                iterations: used,
            },
            Probe::Cut { .. } => Localized {
                value: ExtReal::PlusInf,
                x: None,
                status: SolveStatus::Converged,
                iterations: used,
            },
        };
    }

    let mut r = r0.max(1.0);
    let mut empty_stages = 0usize;
    let mut prev: Option<(Vec<f64>, f64, bool)> = None;
    loop {
        let stage = stage_min(oracle, r, cfg, &mut used);
        match stage.best {
            None => {
                // No feasible point seen in B(0, r). The initial radius is
                // sized to contain one whenever the problem is feasible; two
                // confirming growths guard the estimate.
                if empty_stages >= 2 {
                    return Localized {
                        value: ExtReal::PlusInf,
                        x: None,
                        status: SolveStatus::Converged,
                        iterations: used,
                    };
                }
                empty_stages += 1;
            }
            Some((x, v)) => {
                if v <= -cfg.divergence_value_bound {
                    return Localized {
                        value: ExtReal::MinusInf,
                        x: None,
                        status: SolveStatus::Unbounded,
                        iterations: used,
                    };
                }
                let improved = match &prev {
                    None => true,
                    Some((_, pv, _)) => v < pv - 4.0 * cfg.gap_tol(v),
                };
                if !improved {
                    let (bx, bv, bc) = if prev.as_ref().is_some_and(|(_, pv, _)| *pv <= v) {
                        prev.unwrap()
                    } else {
                        (x, v, stage.certified)
                    };
                    let status = if bc && stage.certified {
                        SolveStatus::Converged
                    } else {
                        SolveStatus::MaxIters
                    };
                    return Localized {
                        value: ExtReal::Finite(bv),
                        x: Some(bx),
                        status,
                        iterations: used,
                    };
                }
                if r >= cfg.divergence_norm_bound {
                    // Still improving at the norm bound: treat as unbounded.
                    return Localized {
                        value: ExtReal::MinusInf,
                        x: None,
                        status: SolveStatus::Unbounded,
                        iterations: used,
                    };
                }
                prev = Some((x, v, stage.certified));
            }
        }
        if used >= cfg.max_iters {
            let (value, x) = match prev {
                Some((x, v, _)) => (ExtReal::Finite(v), Some(x)),
                None => (ExtReal::PlusInf, None),
            };
            return Localized { value, x, status: SolveStatus::MaxIters, iterations: used };
        }
        r *= cfg.bisection_bracket_growth.max(1.5);
    }
}

/// Affine embedding of reduced solver coordinates into class space.
pub(crate) struct Reduction {
    class_count: usize,
    free: Vec<usize>,
    pin_value: Vec<Option<f64>>,
    /// One class expressed as `offset + sum coeffs[k] * x[k]`.
    elim: Option<(usize, Vec<f64>, f64)>,
}

impl Reduction {
    /// `pins` maps classes to fixed values; `elim` optionally eliminates one
    /// class through `<linear, f> = s`.
    pub(crate) fn new(
        class_count: usize,
        pin_value: Vec<Option<f64>>,
        elim_constraint: Option<(&[f64], f64, usize)>,
    ) -> Self {
        let elim_class = elim_constraint.map(|(_, _, j)| j);
        let free: Vec<usize> = (0..class_count)
            .filter(|c| pin_value[*c].is_none() && Some(*c) != elim_class)
            .collect();
        let elim = elim_constraint.map(|(l, s, j)| {
            let mut offset = s;
            for (c, pv) in pin_value.iter().enumerate() {
                if let Some(v) = pv {
                    offset -= l[c] * v;
                }
            }
            let coeffs: Vec<f64> = free.iter().map(|&c| -l[c] / l[j]).collect();
            (j, coeffs, offset / l[j])
        });
        Reduction { class_count, free, pin_value, elim }
    }

    pub(crate) fn dim(&self) -> usize {
        self.free.len()
    }

    pub(crate) fn embed(&self, x: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.class_count];
        for (c, pv) in self.pin_value.iter().enumerate() {
            if let Some(v) = pv {
                full[c] = *v;
            }
        }
        for (k, &c) in self.free.iter().enumerate() {
            full[c] = x[k];
        }
        if let Some((j, coeffs, offset)) = &self.elim {
            full[*j] = offset + coeffs.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        }
        full
    }

    pub(crate) fn pull_back(&self, g_full: &[f64]) -> Vec<f64> {
        let mut g = Vec::with_capacity(self.free.len());
        for (k, &c) in self.free.iter().enumerate() {
            let mut gi = g_full[c];
            if let Some((j, coeffs, _)) = &self.elim {
                gi += coeffs[k] * g_full[*j];
            }
            g.push(gi);
        }
        g
    }

    fn max_pin_abs(&self) -> f64 {
        self.pin_value
            .iter()
            .flatten()
            .fold(0.0_f64, |a, v| a.max(v.abs()))
    }

    fn elim_offset_abs(&self) -> f64 {
        self.elim.as_ref().map_or(0.0, |(_, _, o)| o.abs())
    }
}

/// `E(embed(x)) - <linear, embed(x)>` with cuts where the energy is infinite.
pub(crate) struct CompositeOracle<'a> {
    pub form: &'a NetworkForm,
    pub linear: Option<&'a [f64]>,
    pub red: Reduction,
}

impl Oracle for CompositeOracle<'_> {
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
                if let Some(l) = self.linear {
                    for (c, lc) in l.iter().enumerate() {
                        v -= lc * full[c];
                        g_full[c] = -lc;
                    }
                }
                self.form.accumulate_subgradient(&full, &mut g_full);
                Probe::Val { v, g: self.red.pull_back(&g_full) }
            }
        }
    }
}

/// Sum of the cap radii: a bound on how far feasible gaps can stretch.
pub(crate) fn cap_span(form: &NetworkForm) -> f64 {
    form.edges()
        .iter()
        .filter_map(|e| e.w.finite_radius())
        .sum()
}

fn effectively_zero(sum: f64, scale: f64) -> bool {
    sum.abs() <= 1e-12 * (1.0 + scale)
}

/// Per-component flatness analysis. Returns `Err(())` when a constant shift of
/// an unpinned component tilts the objective (unbounded below); otherwise the
/// gauge pins to add.
fn gauge_pins(
    form: &NetworkForm,
    linear: Option<&[f64]>,
    pin_value: &[Option<f64>],
    avoid: Option<usize>,
) -> std::result::Result<Vec<usize>, ()> {
    let comp_of_class = form.component_of_class();
    let ncomp = comp_of_class.iter().copied().max().map_or(0, |m| m + 1);
    let mut pinned_comp = vec![false; ncomp];
    for (c, pv) in pin_value.iter().enumerate() {
        if pv.is_some() {
            pinned_comp[comp_of_class[c]] = true;
        }
    }
    let l_scale = linear.map_or(0.0, |l| l.iter().map(|v| v.abs()).sum());
    let mut pins = Vec::new();
    for comp in 0..ncomp {
        if pinned_comp[comp] {
            continue;
        }
        let sum: f64 = linear.map_or(0.0, |l| {
            (0..form.class_count())
                .filter(|&c| comp_of_class[c] == comp)
                .map(|c| l[c])
                .sum()
        });
        if !effectively_zero(sum, l_scale) {
            return Err(());
        }
        // Flat gauge: pin the first class of the component (skipping an
        // eliminated coordinate when present).
        let class = (0..form.class_count())
            .find(|&c| comp_of_class[c] == comp && Some(c) != avoid);
        if let Some(c) = class {
            pins.push(c);
        }
    }
    Ok(pins)
}

fn outcome_from_localized(form: &NetworkForm, red: &Reduction, loc: Localized) -> SolveOutcome {
    let argopt = loc.x.map(|x| {
        VertexVector::from_class_values(form, red.embed(&x))
            .expect("embedding matches class count")
    });
    SolveOutcome { value: loc.value, argopt, status: loc.status, iterations: loc.iterations }
}

/// Minimizes `E(f) - <linear, f>` over functions with the given coordinate
/// classes pinned (Dirichlet classes are always pinned to 0).
///
/// Unbounded tilts along flat component constants are detected analytically:
/// if some support component contains no pinned class and the tilt does not
/// sum to zero on it, the outcome is `Unbounded` without iteration. On such
/// flat components the solver otherwise pins one class to 0 (any constant is
/// as good as any other).
pub fn minimize_composite(
    form: &NetworkForm,
    linear: &DualVector,
    pins: &[(usize, f64)],
    cfg: &SolveConfig,
) -> Result<SolveOutcome> {
    form.check_dim(linear.values().len())?;
    let n = form.class_count();
    let mut pin_value: Vec<Option<f64>> = vec![None; n];
    for &(c, v) in pins {
        if c >= n {
            return Err(Error::DimensionMismatch { expected: n, got: c + 1 });
        }
        if !v.is_finite() {
            return Err(Error::ConstructionError(format!("pin value must be finite, got {v}")));
        }
        if let Some(old) = pin_value[c] {
            if old != v {
                return Err(Error::ConstructionError(format!(
                    "class {c} pinned to both {old} and {v}"
                )));
            }
        }
        pin_value[c] = Some(v);
    }
    for c in form.dirichlet_classes() {
        match pin_value[c] {
            Some(v) if v != 0.0 => {
                // The pin contradicts the Dirichlet constraint: the objective
                // is +inf on the whole feasible slice.
                return Ok(SolveOutcome {
                    value: ExtReal::PlusInf,
                    argopt: None,
                    status: SolveStatus::Converged,
                    iterations: 0,
                });
            }
            _ => pin_value[c] = Some(0.0),
        }
    }

    match gauge_pins(form, Some(linear.values()), &pin_value, None) {
        Err(()) => {
            return Ok(SolveOutcome {
                value: ExtReal::MinusInf,
                argopt: None,
                status: SolveStatus::Unbounded,
                iterations: 0,
            })
        }
        Ok(gp) => {
            for c in gp {
                pin_value[c] = Some(0.0);
            }
        }
    }

    let red = Reduction::new(n, pin_value, None);
    let r0 = 16.0 + 4.0 * (1.0 + red.max_pin_abs() + cap_span(form));
    let oracle = CompositeOracle { form, linear: Some(linear.values()), red };
    let loc = localize_min(&oracle, r0, cfg);
    Ok(outcome_from_localized(form, &oracle.red, loc))
}

/// `m(s) = min { E(f) : <linear, f> = s }`, the constrained inner solve behind
/// [`sup_linear_over_sublevel`]. The eliminated coordinate is the one with the
/// largest `|linear|` coefficient among unpinned classes.
///
/// Value `PlusInf` means the affine slice carries no finite-energy point.
pub fn min_energy_on_affine(
    form: &NetworkForm,
    linear: &DualVector,
    s: f64,
    cfg: &SolveConfig,
) -> Result<SolveOutcome> {
    form.check_dim(linear.values().len())?;
    if linear.is_zero() {
        return Err(Error::ZeroLinear);
    }
    let n = form.class_count();
    let l = linear.values();
    let mut pin_value: Vec<Option<f64>> = vec![None; n];
    for c in form.dirichlet_classes() {
        pin_value[c] = Some(0.0);
    }

    let j = (0..n)
        .filter(|&c| pin_value[c].is_none())
        .max_by(|&a, &b| l[a].abs().partial_cmp(&l[b].abs()).unwrap());
    let j = match j {
        Some(j) if l[j] != 0.0 => j,
        // The tilt lives entirely on pinned classes: <linear, f> is constant 0.
        _ => {
            return Ok(SolveOutcome {
                value: if s == 0.0 { ExtReal::Finite(0.0) } else { ExtReal::PlusInf },
                argopt: None,
                status: SolveStatus::Converged,
                iterations: 0,
            })
        }
    };

    // Flat components stay flat inside the slice exactly when the tilt sums
    // to zero there (a shift is then compensated through the eliminated
    // coordinate without changing any energy term).
    if let Ok(gp) = gauge_pins(form, Some(l), &pin_value, Some(j)) {
        for c in gp {
            if c != j {
                pin_value[c] = Some(0.0);
            }
        }
    } else {
        // Component sums that tilt the slice change E when shifted, so the
        // problem stays bounded below by 0; nothing to pin.
    }

    let red = Reduction::new(n, pin_value, Some((l, s, j)));
    let r0 = 16.0 + 4.0 * (1.0 + red.max_pin_abs() + red.elim_offset_abs() + cap_span(form));
    let oracle = CompositeOracle { form, linear: None, red };
    let loc = localize_min(&oracle, r0, cfg);
    Ok(outcome_from_localized(form, &oracle.red, loc))
}

/// `sup { <linear, f> : E(f) <= 1 }` by bracket growth and bisection on
/// `s -> m(s)`: the answer is `sup { s >= 0 : m(s) <= 1 }` (the sup is
/// nonnegative because `f = 0` is feasible).
///
/// Returns `PlusInf` when the sublevel set is unbounded in the `linear`
/// direction (growth passes the divergence norm bound), which happens exactly
/// when a flat component carries a nonzero tilt sum; that case short-circuits
/// analytically. Status is `MaxIters` if any inner solve ran out of budget.
pub fn sup_linear_over_sublevel(
    form: &NetworkForm,
    linear: &DualVector,
    cfg: &SolveConfig,
) -> Result<SolveOutcome> {
    form.check_dim(linear.values().len())?;
    if linear.is_zero() {
        return Err(Error::ZeroLinear);
    }

    // Constants are flat when no Dirichlet pin exists; a tilt with nonzero
    // component sum then rides the flat direction to +inf at zero energy.
    let mut pin_value: Vec<Option<f64>> = vec![None; form.class_count()];
    for c in form.dirichlet_classes() {
        pin_value[c] = Some(0.0);
    }
    if gauge_pins(form, Some(linear.values()), &pin_value, None).is_err() {
        return Ok(SolveOutcome {
            value: ExtReal::PlusInf,
            argopt: None,
            status: SolveStatus::Converged,
            iterations: 0,
        });
    }

    let mut iterations = 0usize;
    let mut budget_hit = false;
    let mut witness: Option<VertexVector> = None;
    let mut eval_m = |s: f64| -> Result<f64> {
        let out = min_energy_on_affine(form, linear, s, cfg)?;
        iterations += out.iterations;
        if out.status == SolveStatus::MaxIters {
            budget_hit = true;
        }
        let v = out.value.to_float();
        if v <= 1.0 {
            if let Some(arg) = out.argopt {
                witness = Some(arg);
            }
        }
        Ok(v)
    };

    // Grow the bracket until m(hi) > 1.
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    loop {
        let m_hi = eval_m(hi)?;
        if m_hi > 1.0 {
            break;
        }
        lo = hi;
        hi *= cfg.bisection_bracket_growth.max(1.5);
        if hi > cfg.divergence_norm_bound {
            return Ok(SolveOutcome {
                value: ExtReal::PlusInf,
                argopt: None,
                status: if budget_hit { SolveStatus::MaxIters } else { SolveStatus::Converged },
                iterations,
            });
        }
    }
    while hi - lo > cfg.tol_abs + cfg.tol_rel * (1.0 + hi.abs()) {
        let mid = 0.5 * (lo + hi);
        if eval_m(mid)? <= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    Ok(SolveOutcome {
        value: ExtReal::Finite(0.5 * (lo + hi)),
        argopt: witness,
        status: if budget_hit { SolveStatus::MaxIters } else { SolveStatus::Converged },
        iterations,
    })
}
