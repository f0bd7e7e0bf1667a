//! Property checkers: each structural fact about network energies becomes a
//! sampled or enumerated assertion producing a [`VerifyReport`].
//!
//! Conventions shared by all checkers:
//!
//! * Violations are measured relative to the right-hand side,
//!   `(lhs - rhs) / (1 + |rhs|)`, so tolerances stay meaningful when values
//!   are large. An infinite right-hand side absorbs anything (violation 0);
//!   an infinite left-hand side against a finite right-hand side is an
//!   infinite violation.
//! * Sampling is seeded (ChaCha8) and coordinates are i.i.d. Gaussian, swept
//!   over the scales {0.1, 1, 10}; contraction parameters use `alpha` in
//!   (0, 3] and `beta` in [-3, 3]. Reports are byte-identical across runs
//!   with the same seed.
//! * The witness records the worst sample seen, even when the check passes.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::convex::{apply_contraction, NormalContraction, PiecewiseLinear, ScalarConvex};
use crate::ext::ExtNonNeg;
use crate::forms::{
    relabeled_in_series, series_identify, series_resistor, NetworkForm, VertexVector,
};
use crate::resistance::{
    approximating_form, conjugate, elementary_resistance, luxemburg, orlicz, t_resistance,
};
use crate::solver::SolveConfig;
use crate::{Error, Result};

/// Approximants of an infinite energy must reach at least this value at the
/// largest penalty weight for [`check_sup_approximation`] to accept.
pub const SUP_APPROX_INFINITE_THRESHOLD: f64 = 1e6;

/// Outcome of one checker run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub property: String,
    pub passed: bool,
    pub samples: usize,
    pub worst_violation: ExtNonNeg,
    /// Inputs of the worst sample; `None` when every violation was 0.
    pub witness: Option<Value>,
    pub tolerance: f64,
}

/// Accumulates per-sample violations; `passed` iff the worst stays within
/// tolerance.
struct Tracker {
    property: &'static str,
    tolerance: f64,
    samples: usize,
    worst: ExtNonNeg,
    witness: Option<Value>,
}

impl Tracker {
    fn new(property: &'static str, tolerance: f64) -> Self {
        Tracker {
            property,
            tolerance,
            samples: 0,
            worst: ExtNonNeg::finite(0.0),
            witness: None,
        }
    }

    fn observe(&mut self, violation: ExtNonNeg, witness: impl FnOnce() -> Value) {
        self.samples += 1;
        // Ties keep the first witness: deterministic under a fixed seed.
        if violation > self.worst {
            self.worst = violation;
            self.witness = Some(witness());
        }
    }

    fn finish(self) -> VerifyReport {
        VerifyReport {
            property: self.property.to_string(),
            passed: self.worst <= ExtNonNeg::finite(self.tolerance),
            samples: self.samples,
            worst_violation: self.worst,
            witness: self.witness,
            tolerance: self.tolerance,
        }
    }
}

/// One-sided gap `lhs <= rhs`, relative to `1 + |rhs|`.
fn one_sided_gap(lhs: ExtNonNeg, rhs: ExtNonNeg) -> ExtNonNeg {
    match (lhs, rhs) {
        (_, ExtNonNeg::Infinite) => ExtNonNeg::finite(0.0),
        (ExtNonNeg::Infinite, ExtNonNeg::Finite(_)) => ExtNonNeg::Infinite,
        (ExtNonNeg::Finite(a), ExtNonNeg::Finite(b)) => {
            ExtNonNeg::finite(((a - b) / (1.0 + b.abs())).max(0.0))
        }
    }
}

/// Two-sided gap `lhs = rhs`, relative to `1 + |rhs|`.
fn equality_gap(lhs: ExtNonNeg, rhs: ExtNonNeg) -> ExtNonNeg {
    match (lhs, rhs) {
        (ExtNonNeg::Infinite, ExtNonNeg::Infinite) => ExtNonNeg::finite(0.0),
        (ExtNonNeg::Finite(a), ExtNonNeg::Finite(b)) => {
            ExtNonNeg::finite((a - b).abs() / (1.0 + b.abs()))
        }
        _ => ExtNonNeg::Infinite,
    }
}

/// Same gaps on raw floats where `+inf` stands in for the infinite value.
fn one_sided_gap_f(lhs: f64, rhs: f64) -> ExtNonNeg {
    let wrap = |v: f64| {
        if v.is_infinite() {
            ExtNonNeg::Infinite
        } else {
            ExtNonNeg::finite(v.max(0.0))
        }
    };
    one_sided_gap(wrap(lhs), wrap(rhs))
}

/// Energy functional on coordinate classes, as seen by the contraction
/// checker. [`NetworkForm`] is the real implementor; [`SumSquareProbe`] is a
/// deliberately incompatible energy used to show the checker has teeth.
pub trait Energy {
    fn class_count(&self) -> usize;
    /// `f.len()` must equal `class_count()`.
    fn energy(&self, f: &[f64]) -> ExtNonNeg;
}

impl Energy for NetworkForm {
    fn class_count(&self) -> usize {
        self.class_count()
    }
    fn energy(&self, f: &[f64]) -> ExtNonNeg {
        self.energy_raw(f)
    }
}

/// Test probe `coeff * (f(u) + f(v))^2` with `u != v`.
///
/// A sum of values is not a difference, so normal contractions do not
/// operate on this energy; checkers run against it must fail. (With `u = v`
/// the probe degenerates to `4 coeff f(u)^2`, which contractions do respect,
/// hence the constructor rejects it.)
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumSquareProbe {
    classes: usize,
    u: usize,
    v: usize,
    coeff: f64,
}

impl SumSquareProbe {
    pub fn new(classes: usize, u: usize, v: usize, coeff: f64) -> Result<Self> {
        if u >= classes || v >= classes {
            return Err(Error::ConstructionError(format!(
                "probe indices ({u}, {v}) out of range for {classes} classes"
            )));
        }
        if u == v {
            return Err(Error::ConstructionError(
                "probe needs two distinct coordinates".into(),
            ));
        }
        if !(coeff.is_finite() && coeff > 0.0) {
            return Err(Error::ConstructionError(format!(
                "probe coefficient must be > 0, got {coeff}"
            )));
        }
        Ok(SumSquareProbe { classes, u, v, coeff })
    }
}

impl Energy for SumSquareProbe {
    fn class_count(&self) -> usize {
        self.classes
    }
    fn energy(&self, f: &[f64]) -> ExtNonNeg {
        let s = f[self.u] + f[self.v];
        ExtNonNeg::finite(self.coeff * s * s)
    }
}

/// Families of normal contractions the samplers draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractionFamily {
    /// `t ∧ alpha`, `alpha` uniform in (0, 3].
    MinWith,
    /// `|t - beta| - |beta|`, `beta` uniform in [-3, 3].
    FoldAt,
    /// Random piecewise-linear contraction, up to 3 knots per side of 0.
    Piecewise,
}

/// Every sampled family.
pub const ALL_FAMILIES: [ContractionFamily; 3] = [
    ContractionFamily::MinWith,
    ContractionFamily::FoldAt,
    ContractionFamily::Piecewise,
];

const SCALES: [f64; 3] = [0.1, 1.0, 10.0];

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; clamp u1 away from 0 to keep ln finite.
    let u1: f64 = rng.gen::<f64>().max(1e-12);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn gaussian_vec(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| scale * gaussian(rng)).collect()
}

/// Piecewise-linear contraction with exact knot (0, 0), knot spacing at least
/// 0.3, and segment slopes uniform in [-1, 1].
fn random_piecewise(rng: &mut ChaCha8Rng) -> NormalContraction {
    let mut side = |dir: f64| {
        let mut knots = Vec::new();
        let (mut x, mut v) = (0.0, 0.0);
        for _ in 0..rng.gen_range(1..=3usize) {
            let dx = 0.3 + 2.0 * rng.gen::<f64>();
            let s = 2.0 * rng.gen::<f64>() - 1.0;
            x += dir * dx;
            v += dir * s * dx;
            knots.push((x, v));
        }
        knots
    };
    let right = side(1.0);
    let mut pts = side(-1.0);
    pts.reverse();
    pts.push((0.0, 0.0));
    pts.extend(right);
    NormalContraction::Piecewise(
        PiecewiseLinear::new(pts).expect("construction keeps slopes within 1"),
    )
}

fn sample_contraction(rng: &mut ChaCha8Rng, family: ContractionFamily) -> NormalContraction {
    match family {
        ContractionFamily::MinWith => {
            // alpha in (0, 3]: 3 (1 - u) with u in [0, 1).
            NormalContraction::min_with(3.0 * (1.0 - rng.gen::<f64>())).expect("alpha > 0")
        }
        ContractionFamily::FoldAt => {
            NormalContraction::fold_at(6.0 * rng.gen::<f64>() - 3.0).expect("finite beta")
        }
        ContractionFamily::Piecewise => random_piecewise(rng),
    }
}

fn add(f: &[f64], g: &[f64], sign: f64) -> Vec<f64> {
    f.iter().zip(g).map(|(a, b)| a + sign * b).collect()
}

/// Seeded Gaussian vertex vectors over the standard scale sweep, for feeding
/// the functional checkers. Dirichlet classes are kept at 0 so the samples
/// stay inside the energy's domain.
pub fn sample_vertex_vectors(form: &NetworkForm, n_samples: usize, seed: u64) -> Vec<VertexVector> {
    let pinned = form.dirichlet_classes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_samples)
        .map(|i| {
            let scale = SCALES[i % SCALES.len()];
            let mut vals = gaussian_vec(&mut rng, form.class_count(), scale);
            for &c in &pinned {
                vals[c] = 0.0;
            }
            VertexVector::from_class_values(form, vals).expect("dimension matches")
        })
        .collect()
}

/// Splitting inequality `E(f + Cg) + E(f - Cg) <= E(f + g) + E(f - g)` over
/// sampled `(f, g)` and sampled contractions `C` from `families` (all three
/// families when the slice is empty).
pub fn check_contraction_compatibility(
    energy: &dyn Energy,
    families: &[ContractionFamily],
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> VerifyReport {
    let families = if families.is_empty() { &ALL_FAMILIES[..] } else { families };
    let n = energy.class_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tracker = Tracker::new("contraction-compatibility", tol);
    for i in 0..n_samples {
        let scale = SCALES[i % SCALES.len()];
        let f = gaussian_vec(&mut rng, n, scale);
        let g = gaussian_vec(&mut rng, n, scale);
        let c = sample_contraction(&mut rng, families[i % families.len()]);
        let cg = apply_contraction(&c, &g);
        let lhs = energy.energy(&add(&f, &cg, 1.0)) + energy.energy(&add(&f, &cg, -1.0));
        let rhs = energy.energy(&add(&f, &g, 1.0)) + energy.energy(&add(&f, &g, -1.0));
        tracker.observe(one_sided_gap(lhs, rhs), || {
            json!({
                "sample": i, "f": f, "g": g, "contraction": c,
                "lhs": lhs, "rhs": rhs,
            })
        });
    }
    tracker.finish()
}

/// Ordered triples of distinct vertex labels, for [`check_triangle`].
pub fn all_vertex_triples(form: &NetworkForm) -> Vec<(String, String, String)> {
    let labels = form.vertex_labels();
    let mut out = Vec::new();
    for x in labels {
        for y in labels {
            for z in labels {
                if x != y && y != z && x != z {
                    out.push((x.clone(), y.clone(), z.clone()));
                }
            }
        }
    }
    out
}

/// Triangle inequality `Rt(x, z) <= Rt(x, y) + Rt(y, z)` over the given
/// triples. Values are memoized per coordinate-class pair.
pub fn check_triangle(
    form: &NetworkForm,
    t: f64,
    triples: &[(String, String, String)],
    cfg: &SolveConfig,
    tol: f64,
) -> Result<VerifyReport> {
    let mut cache: BTreeMap<(usize, usize), ExtNonNeg> = BTreeMap::new();
    let mut rt = |x: &str, y: &str| -> Result<ExtNonNeg> {
        let key = (form.class_of(x)?, form.class_of(y)?);
        if let Some(&v) = cache.get(&key) {
            return Ok(v);
        }
        let v = t_resistance(form, x, y, t, cfg)?.value;
        cache.insert(key, v);
        Ok(v)
    };
    let mut tracker = Tracker::new("triangle-inequality", tol);
    for (x, y, z) in triples {
        let xz = rt(x, z)?;
        let xy = rt(x, y)?;
        let yz = rt(y, z)?;
        tracker.observe(one_sided_gap(xz, xy + yz), || {
            json!({
                "triple": [x, y, z], "t": t,
                "xz": xz, "xy": xy, "yz": yz,
            })
        });
    }
    Ok(tracker.finish())
}

/// Series additivity over a glued point:
/// `Rt(x1, x2)` on `series_identify(f1, xi1, f2, xi2)` equals
/// `Rt_1(x1, xi1) + Rt_2(xi2, x2)`.
pub fn check_additivity_identify(
    form1: &NetworkForm,
    xi1: &str,
    form2: &NetworkForm,
    xi2: &str,
    x1: &str,
    x2: &str,
    t: f64,
    cfg: &SolveConfig,
    tol: f64,
) -> Result<VerifyReport> {
    let glued = series_identify(form1, xi1, form2, xi2)?;
    let x2_glued = relabeled_in_series(form1, form2, x2)?;
    let lhs = t_resistance(&glued, x1, &x2_glued, t, cfg)?.value;
    let r1 = t_resistance(form1, x1, xi1, t, cfg)?.value;
    let r2 = t_resistance(form2, xi2, x2, t, cfg)?.value;
    let rhs = r1 + r2;
    let mut tracker = Tracker::new("serial-additivity-identify", tol);
    tracker.observe(equality_gap(lhs, rhs), || {
        json!({
            "x1": x1, "xi1": xi1, "xi2": xi2, "x2": x2, "t": t,
            "glued": lhs, "first": r1, "second": r2,
        })
    });
    Ok(tracker.finish())
}

/// Series additivity across a connecting resistor:
/// `Rt(x1, x2)` on `series_resistor(f1, xi1, f2, xi2, eps)` equals
/// `Rt_1(x1, xi1) + Rt_2(xi2, x2) + eps t^2`.
pub fn check_additivity_resistor(
    form1: &NetworkForm,
    xi1: &str,
    form2: &NetworkForm,
    xi2: &str,
    x1: &str,
    x2: &str,
    t: f64,
    eps: f64,
    cfg: &SolveConfig,
    tol: f64,
) -> Result<VerifyReport> {
    let glued = series_resistor(form1, xi1, form2, xi2, eps)?;
    let x2_glued = relabeled_in_series(form1, form2, x2)?;
    let lhs = t_resistance(&glued, x1, &x2_glued, t, cfg)?.value;
    let r1 = t_resistance(form1, x1, xi1, t, cfg)?.value;
    let r2 = t_resistance(form2, xi2, x2, t, cfg)?.value;
    let rhs = r1 + r2 + ExtNonNeg::finite(eps * t * t);
    let mut tracker = Tracker::new("serial-additivity-resistor", tol);
    tracker.observe(equality_gap(lhs, rhs), || {
        json!({
            "x1": x1, "xi1": xi1, "xi2": xi2, "x2": x2, "t": t, "eps": eps,
            "glued": lhs, "first": r1, "second": r2,
        })
    });
    Ok(tracker.finish())
}

/// The single power exponent of a form built purely from `ScaledPower` terms
/// (hyperedges count as exponent 2, identically zero edges are ignored).
/// Errors with [`Error::MixedExponents`] otherwise.
fn homogeneity_exponent(form: &NetworkForm, p: f64) -> Result<()> {
    let check = |q: f64| -> Result<()> {
        if q == p {
            Ok(())
        } else {
            Err(Error::MixedExponents(format!("expected exponent {p}, found {q}")))
        }
    };
    for e in form.edges() {
        match &e.w {
            ScalarConvex::ScaledPower { c, p: q } => {
                if *c > 0.0 {
                    check(*q)?;
                }
            }
            w => {
                return Err(Error::MixedExponents(format!(
                    "non-power edge term {w:?}"
                )))
            }
        }
    }
    for h in form.hyperedges() {
        if h.mu > 0.0 {
            check(2.0)?;
        }
    }
    Ok(())
}

/// Tilted resistance of a `p`-homogeneous form against its closed form:
/// for `p > 1`, `Rt(x, y) = (p - 1) (t/p)^q R(x, y)^q` with `q = p/(p-1)`;
/// for `p = 1`, `Rt` is 0 when `t R < 1` and infinite when `t R > 1` (pairs
/// with `|t R - 1| <= tol` are skipped as undecided).
pub fn check_homogeneous_identity(
    form: &NetworkForm,
    p: f64,
    t_list: &[f64],
    pairs: &[(String, String)],
    cfg: &SolveConfig,
    tol: f64,
) -> Result<VerifyReport> {
    homogeneity_exponent(form, p)?;
    let mut tracker = Tracker::new("homogeneous-identity", tol);
    for (x, y) in pairs {
        let r = elementary_resistance(form, x, y, cfg)?.value;
        for &t in t_list {
            let rt = t_resistance(form, x, y, t, cfg)?.value;
            let (violation, expected) = if p > 1.0 {
                let expected = homogeneous_tilted(r, p, t);
                (equality_gap(rt, expected), expected)
            } else {
                let tr = r.scale(t);
                match tr {
                    ExtNonNeg::Finite(v) if v < 1.0 - tol => {
                        (one_sided_gap(rt, ExtNonNeg::finite(0.0)), ExtNonNeg::finite(0.0))
                    }
                    ExtNonNeg::Finite(v) if v <= 1.0 + tol => continue,
                    _ => {
                        // t R > 1: the tilt escapes the unit ball, so the sup
                        // must be infinite; a finite value is a flat failure.
                        let v = if rt.is_infinite() {
                            ExtNonNeg::finite(0.0)
                        } else {
                            ExtNonNeg::finite(1.0)
                        };
                        (v, ExtNonNeg::Infinite)
                    }
                }
            };
            tracker.observe(violation, || {
                json!({
                    "pair": [x, y], "t": t, "p": p,
                    "resistance": r, "tilted": rt, "expected": expected,
                })
            });
        }
    }
    Ok(tracker.finish())
}

/// Closed form `(p - 1) (t/p)^q r^q` of the tilted resistance for `p > 1`,
/// `q` the conjugate exponent; infinite `r` stays infinite.
fn homogeneous_tilted(r: ExtNonNeg, p: f64, t: f64) -> ExtNonNeg {
    let q = p / (p - 1.0);
    match r {
        ExtNonNeg::Infinite => ExtNonNeg::Infinite,
        ExtNonNeg::Finite(r) => ExtNonNeg::from_float((p - 1.0) * (t / p).powf(q) * r.powf(q)),
    }
}

/// Norm sandwich `lux <= orl <= 2 lux` between the Luxemburg and Orlicz
/// functionals, plus a Fenchel-Young spot check `<phi, f> <= E(f) + E*(phi)`
/// with `phi` a subgradient of `E` at `f` (skipped where `E(f)` is infinite).
pub fn check_fundamental_inequalities(
    form: &NetworkForm,
    f_samples: &[VertexVector],
    cfg: &SolveConfig,
    tol: f64,
) -> Result<VerifyReport> {
    let mut tracker = Tracker::new("fundamental-inequalities", tol);
    for (i, f) in f_samples.iter().enumerate() {
        let lux = luxemburg(form, f, cfg)?.value;
        let orl = orlicz(form, f, cfg)?.value;
        let lower = one_sided_gap(lux, orl);
        let upper = one_sided_gap(orl, lux.scale(2.0));
        let sandwich = if lower > upper { lower } else { upper };
        tracker.observe(sandwich, || {
            json!({
                "sample": i, "f": f.values(), "luxemburg": lux, "orlicz": orl,
                "check": "sandwich",
            })
        });
        let energy = form.evaluate(f)?;
        if let ExtNonNeg::Finite(ef) = energy {
            let phi = form.subgradient(f)?;
            let pairing: f64 =
                phi.values().iter().zip(f.values()).map(|(a, b)| a * b).sum();
            let dual = conjugate(form, &phi, cfg)?.value;
            let fy = one_sided_gap_f(pairing, ef + dual.to_float());
            tracker.observe(fy, || {
                json!({
                    "sample": i, "f": f.values(), "phi": phi.values(),
                    "pairing": pairing, "energy": ef, "conjugate": dual,
                    "check": "fenchel-young",
                })
            });
        }
    }
    Ok(tracker.finish())
}

/// Sampled doubling estimates; see [`estimate_delta2_nabla2`].
#[derive(Debug, Clone, PartialEq)]
pub struct Delta2Estimate {
    /// Largest sampled ratio `E(2f) / E(f)`.
    pub c_hat: ExtNonNeg,
    /// Smallest sampled ratio.
    pub k_hat: ExtNonNeg,
    /// True when every sampled ratio stayed finite.
    pub delta2_plausible: bool,
    /// True when every sampled ratio exceeded 2.
    pub nabla2_plausible: bool,
    pub report: VerifyReport,
}

/// Estimates the doubling constants `E(2f) / E(f)` over the samples with
/// `E(f)` finite and positive. These are sampled estimates, not proofs: the
/// report always passes and carries the ratios as its witness.
pub fn estimate_delta2_nabla2(form: &NetworkForm, f_samples: &[VertexVector]) -> Delta2Estimate {
    let mut c_hat = ExtNonNeg::finite(0.0);
    let mut k_hat = ExtNonNeg::Infinite;
    let mut used = 0usize;
    for f in f_samples {
        let base = match form.evaluate(f) {
            Ok(ExtNonNeg::Finite(v)) if v > 0.0 => v,
            _ => continue,
        };
        let doubled = form.energy_raw(&f.values().iter().map(|v| 2.0 * v).collect::<Vec<_>>());
        let ratio = match doubled {
            ExtNonNeg::Finite(d) => ExtNonNeg::finite(d / base),
            ExtNonNeg::Infinite => ExtNonNeg::Infinite,
        };
        if ratio > c_hat {
            c_hat = ratio;
        }
        if ratio < k_hat {
            k_hat = ratio;
        }
        used += 1;
    }
    if used == 0 {
        c_hat = ExtNonNeg::finite(0.0);
        k_hat = ExtNonNeg::finite(0.0);
    }
    let delta2_plausible = used > 0 && c_hat.is_finite();
    let nabla2_plausible = used > 0 && k_hat > ExtNonNeg::finite(2.0);
    let report = VerifyReport {
        property: "doubling-estimate".to_string(),
        passed: true,
        samples: used,
        worst_violation: ExtNonNeg::finite(0.0),
        witness: Some(json!({
            "c_hat": c_hat, "k_hat": k_hat,
            "delta2_plausible": delta2_plausible,
            "nabla2_plausible": nabla2_plausible,
            "note": "sampled estimates, not proofs",
        })),
        tolerance: 0.0,
    };
    Delta2Estimate { c_hat, k_hat, delta2_plausible, nabla2_plausible, report }
}

/// Two-coordinate contraction map on a `p`-homogeneous form:
/// `(E(f + Cg) + E(f - Cg))^{1/p} <= (E(f + g) + E(f - g))^{1/p}` for sampled
/// `f, g, C`. Solver-free; evaluates the energy directly.
pub fn check_p_contraction_map(
    form: &NetworkForm,
    p: f64,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<VerifyReport> {
    homogeneity_exponent(form, p)?;
    let n = form.class_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tracker = Tracker::new("p-contraction-map", tol);
    for i in 0..n_samples {
        let scale = SCALES[i % SCALES.len()];
        let f = gaussian_vec(&mut rng, n, scale);
        let g = gaussian_vec(&mut rng, n, scale);
        let c = sample_contraction(&mut rng, ALL_FAMILIES[i % ALL_FAMILIES.len()]);
        let cg = apply_contraction(&c, &g);
        let lhs = (form.energy_raw(&add(&f, &cg, 1.0)).to_float()
            + form.energy_raw(&add(&f, &cg, -1.0)).to_float())
        .powf(1.0 / p);
        let rhs = (form.energy_raw(&add(&f, &g, 1.0)).to_float()
            + form.energy_raw(&add(&f, &g, -1.0)).to_float())
        .powf(1.0 / p);
        tracker.observe(one_sided_gap_f(lhs, rhs), || {
            json!({
                "sample": i, "f": f, "g": g, "contraction": c,
                "lhs": lhs, "rhs": rhs,
            })
        });
    }
    Ok(tracker.finish())
}

/// Penalized approximants recover the energy: along an increasing
/// `alpha_schedule` (penalty set = all vertices, quadratic penalty) the
/// approximants are nondecreasing, never exceed `E(f)`, and at the largest
/// weight reach `E(f)` within tolerance, or exceed
/// [`SUP_APPROX_INFINITE_THRESHOLD`] when `E(f)` is infinite.
pub fn check_sup_approximation(
    form: &NetworkForm,
    f_samples: &[VertexVector],
    alpha_schedule: &[f64],
    cfg: &SolveConfig,
    tol: f64,
) -> Result<VerifyReport> {
    if alpha_schedule.is_empty() {
        return Err(Error::ConstructionError("alpha schedule must be nonempty".into()));
    }
    if alpha_schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::ConstructionError("alpha schedule must be increasing".into()));
    }
    let k_set: Vec<&str> = form.vertex_labels().iter().map(|s| s.as_str()).collect();
    let mut tracker = Tracker::new("sup-approximation", tol);
    for (i, f) in f_samples.iter().enumerate() {
        let energy = form.evaluate(f)?;
        let mut values = Vec::with_capacity(alpha_schedule.len());
        for &alpha in alpha_schedule {
            values.push(approximating_form(form, alpha, &k_set, 2.0, f, cfg)?.value);
        }
        let witness = |values: &[ExtNonNeg], kind: &str| {
            json!({
                "sample": i, "f": f.values(), "alphas": alpha_schedule,
                "approximants": values, "energy": energy, "check": kind,
            })
        };
        // Monotone in alpha, and bounded by the energy at every alpha.
        let mut worst_step = ExtNonNeg::finite(0.0);
        for w in values.windows(2) {
            let drop = one_sided_gap(w[0], w[1]);
            if drop > worst_step {
                worst_step = drop;
            }
        }
        tracker.observe(worst_step, || witness(&values, "monotone"));
        let mut worst_bound = ExtNonNeg::finite(0.0);
        for &v in &values {
            let over = one_sided_gap(v, energy);
            if over > worst_bound {
                worst_bound = over;
            }
        }
        tracker.observe(worst_bound, || witness(&values, "upper-bound"));
        let last = *values.last().expect("schedule nonempty");
        let closing = match energy {
            ExtNonNeg::Finite(_) => equality_gap(last, energy),
            ExtNonNeg::Infinite => {
                if last.to_float() >= SUP_APPROX_INFINITE_THRESHOLD {
                    ExtNonNeg::finite(0.0)
                } else {
                    ExtNonNeg::finite(1.0)
                }
            }
        };
        tracker.observe(closing, || witness(&values, "recovers-energy"));
    }
    Ok(tracker.finish())
}
