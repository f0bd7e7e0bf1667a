//! Scalar convex energies and normal contractions.
//!
//! A scalar energy `w : R -> [0, +inf]` here is even, convex, and vanishes at 0.
//! Three families cover the crate's needs:
//!
//! * `ScaledPower { c, p }`: `(c/p) |t|^p` with `c >= 0`, `p >= 1`;
//! * `CoshMinusOne { c }`: `c (cosh t - 1)` with `c >= 0`;
//! * `Capped { inner, cap }`: `inner(t)` for `|t| <= cap`, `+inf` beyond.
//!
//! Conjugates `w*(s) = sup_t (s t - w(t))` are analytic for the first two
//! families; `Capped` falls back to a numeric 1-D maximization over the cap
//! interval (documented fallback, golden-section on the concave objective).
//!
//! A normal contraction is a map `C : R -> R` with `C(0) = 0` and
//! `|C(s) - C(t)| <= |s - t|`. Besides the identity and negation the crate
//! ships the two one-parameter families that generate all of them, `t ∧ alpha`
//! and `|t - beta| - |beta|`, plus arbitrary piecewise-linear contractions.

use serde::{Deserialize, Serialize};

use crate::{Error, ExtNonNeg, Result};

/// Even convex scalar energy with `w(0) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "wire::Scalar", into = "wire::Scalar")]
pub enum ScalarConvex {
    /// `(c/p) |t|^p`, `c >= 0`, `p >= 1`.
    ScaledPower { c: f64, p: f64 },
    /// `c (cosh t - 1)`, `c >= 0`.
    CoshMinusOne { c: f64 },
    /// `inner(t)` on `[-cap, cap]`, `+inf` outside; `cap > 0`.
    Capped { inner: Box<ScalarConvex>, cap: f64 },
}

impl ScalarConvex {
    pub fn power(c: f64, p: f64) -> Result<Self> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::ConstructionError(format!("power coefficient must be >= 0, got {c}")));
        }
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::ConstructionError(format!("power exponent must be >= 1, got {p}")));
        }
        Ok(ScalarConvex::ScaledPower { c, p })
    }

    pub fn cosh_minus_one(c: f64) -> Result<Self> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::ConstructionError(format!("cosh coefficient must be >= 0, got {c}")));
        }
        Ok(ScalarConvex::CoshMinusOne { c })
    }

    pub fn capped(inner: ScalarConvex, cap: f64) -> Result<Self> {
        if !(cap.is_finite() && cap > 0.0) {
            return Err(Error::ConstructionError(format!("cap must be > 0, got {cap}")));
        }
        Ok(ScalarConvex::Capped { inner: Box::new(inner), cap })
    }

    /// True when `w` is the zero function on all of `R`. A capped term is
    /// never identically zero: it takes the value `+inf` beyond its cap, which
    /// is why a cap alone already produces finite resistances.
    pub fn is_identically_zero(&self) -> bool {
        match self {
            ScalarConvex::ScaledPower { c, .. } => *c == 0.0,
            ScalarConvex::CoshMinusOne { c } => *c == 0.0,
            ScalarConvex::Capped { .. } => false,
        }
    }

    /// Largest interval radius on which `w` is finite (`None` = all of `R`).
    pub(crate) fn finite_radius(&self) -> Option<f64> {
        match self {
            ScalarConvex::Capped { inner, cap } => {
                Some(inner.finite_radius().map_or(*cap, |r| r.min(*cap)))
            }
            _ => None,
        }
    }
}

/// Evaluates `w(t)`.
pub fn eval_scalar(w: &ScalarConvex, t: f64) -> ExtNonNeg {
    match w {
        ScalarConvex::ScaledPower { c, p } => {
            if *c == 0.0 {
                return ExtNonNeg::finite(0.0);
            }
            ExtNonNeg::from_float((c / p) * t.abs().powf(*p))
        }
        ScalarConvex::CoshMinusOne { c } => {
            if *c == 0.0 {
                return ExtNonNeg::finite(0.0);
            }
            ExtNonNeg::from_float(c * (t.cosh() - 1.0))
        }
        ScalarConvex::Capped { inner, cap } => {
            if t.abs() <= *cap {
                eval_scalar(inner, t)
            } else {
                ExtNonNeg::Infinite
            }
        }
    }
}

/// Subdifferential of `w` at `t` as a closed interval of slopes.
///
/// Errors with [`Error::DomainBoundary`] where the subdifferential is not a
/// bounded interval: for `Capped` at `|t| >= cap` (on the wall it is a
/// half-line, outside it is empty).
pub fn scalar_subdifferential(w: &ScalarConvex, t: f64) -> Result<(f64, f64)> {
    match w {
        ScalarConvex::ScaledPower { c, p } => {
            if *p == 1.0 {
                if t == 0.0 {
                    Ok((-c, *c))
                } else {
                    let d = c * t.signum();
                    Ok((d, d))
                }
            } else {
                let d = c * t.abs().powf(p - 1.0) * t.signum();
                Ok((d, d))
            }
        }
        ScalarConvex::CoshMinusOne { c } => {
            let d = c * t.sinh();
            Ok((d, d))
        }
        ScalarConvex::Capped { inner, cap } => {
            if t.abs() >= *cap {
                Err(Error::DomainBoundary(format!(
                    "capped term at |{t}| >= cap {cap}"
                )))
            } else {
                scalar_subdifferential(inner, t)
            }
        }
    }
}

/// A subgradient selection that is total on the closure of the finite domain:
/// kinks resolve to 0 where possible, cap walls resolve to the inner slope.
/// Solver cuts rely on this being a valid subgradient wherever `w` is finite.
pub(crate) fn slope_select(w: &ScalarConvex, t: f64) -> f64 {
    match w {
        ScalarConvex::ScaledPower { c, p } => {
            if *p == 1.0 {
                if t == 0.0 {
                    0.0
                } else {
                    c * t.signum()
                }
            } else {
                c * t.abs().powf(p - 1.0) * t.signum()
            }
        }
        ScalarConvex::CoshMinusOne { c } => c * t.sinh(),
        ScalarConvex::Capped { inner, cap } => {
            slope_select(inner, t.clamp(-*cap, *cap))
        }
    }
}

/// Convex conjugate `w*(s) = sup_t (s t - w(t))`.
///
/// Analytic for `ScaledPower` (dual power for `p > 1`, slope indicator for
/// `p = 1`) and `CoshMinusOne`; numeric golden-section maximization over the
/// cap interval for `Capped`.
pub fn scalar_conjugate(w: &ScalarConvex, s: f64) -> ExtNonNeg {
    match w {
        ScalarConvex::ScaledPower { c, p } => {
            if *c == 0.0 {
                // Conjugate of the zero function: indicator of {0}.
                return if s == 0.0 { ExtNonNeg::finite(0.0) } else { ExtNonNeg::Infinite };
            }
            if *p == 1.0 {
                return if s.abs() <= *c { ExtNonNeg::finite(0.0) } else { ExtNonNeg::Infinite };
            }
            if s == 0.0 {
                return ExtNonNeg::finite(0.0);
            }
            let q = p / (p - 1.0);
            // (c^(1-q)/q) |s|^q, computed in log form to dodge 0 * inf.
            let ln = (1.0 - q) * c.ln() + q * s.abs().ln() - q.ln();
            ExtNonNeg::from_float(ln.exp())
        }
        ScalarConvex::CoshMinusOne { c } => {
            if *c == 0.0 {
                return if s == 0.0 { ExtNonNeg::finite(0.0) } else { ExtNonNeg::Infinite };
            }
            let r = s / c;
            if r == 0.0 {
                return ExtNonNeg::finite(0.0);
            }
            let a = r.abs();
            let val = if a > 1e8 {
                // sqrt(1 + r^2) = |r| + O(1/|r|); keeps inf - inf out.
                c * (a * (a.asinh() - 1.0) + 1.0)
            } else {
                c * (a * a.asinh() - (1.0 + a * a).sqrt() + 1.0)
            };
            ExtNonNeg::from_float(val.max(0.0))
        }
        ScalarConvex::Capped { inner, cap } => {
            let r = inner.finite_radius().map_or(*cap, |ir| ir.min(*cap));
            ExtNonNeg::finite(capped_conjugate_numeric(inner, r, s))
        }
    }
}

/// `sup { s t - inner(t) : |t| <= r }` by golden-section search.
///
/// The objective is concave in `t`; by evenness of `inner` the supremum for
/// `s >= 0` is attained on `[0, r]`.
fn capped_conjugate_numeric(inner: &ScalarConvex, r: f64, s: f64) -> f64 {
    let s_abs = s.abs();
    let g = |t: f64| -> f64 { s_abs * t - eval_scalar(inner, t).to_float() };
    let inv_phi = 0.618_033_988_749_894_9_f64;
    let (mut lo, mut hi) = (0.0_f64, r);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..200 {
        if hi - lo < 1e-14 * (1.0 + r) {
            break;
        }
        if gc >= gd {
            hi = d;
            d = c;
            gd = gc;
            c = hi - inv_phi * (hi - lo);
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + inv_phi * (hi - lo);
            gd = g(d);
        }
    }
    // sup >= g(0) = 0, and the endpoint may carry the max (slope still
    // positive at the wall).
    g(0.5 * (lo + hi)).max(g(r)).max(0.0)
}

/// Normal contraction: `C(0) = 0`, `|C(s) - C(t)| <= |s - t|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "wire::Contraction", into = "wire::Contraction")]
pub enum NormalContraction {
    Identity,
    Negate,
    /// `t ∧ alpha`, `alpha > 0`.
    MinWith { alpha: f64 },
    /// `|t - beta| - |beta|`.
    FoldAt { beta: f64 },
    Piecewise(PiecewiseLinear),
}

/// Piecewise-linear contraction given by interpolation knots `(t_i, v_i)`,
/// extended by constants beyond the first and last knot.
///
/// Construction enforces strictly increasing `t_i`, segment slopes of modulus
/// at most 1, and value 0 at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    points: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::ConstructionError("piecewise contraction needs at least one knot".into()));
        }
        for (t, v) in &points {
            if !t.is_finite() || !v.is_finite() {
                return Err(Error::ConstructionError(format!("non-finite knot ({t}, {v})")));
            }
        }
        for w in points.windows(2) {
            let (t0, v0) = w[0];
            let (t1, v1) = w[1];
            if t1 <= t0 {
                return Err(Error::ConstructionError(format!(
                    "knot abscissae must be strictly increasing, got {t0} then {t1}"
                )));
            }
            let slope = (v1 - v0) / (t1 - t0);
            if slope.abs() > 1.0 + 1e-12 {
                return Err(Error::ConstructionError(format!(
                    "segment slope {slope} exceeds 1 in modulus"
                )));
            }
        }
        let pl = PiecewiseLinear { points };
        let at_zero = pl.eval(0.0);
        if at_zero.abs() > 1e-12 {
            return Err(Error::ConstructionError(format!("value at 0 must be 0, got {at_zero}")));
        }
        Ok(pl)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    fn eval(&self, t: f64) -> f64 {
        let pts = &self.points;
        if t <= pts[0].0 {
            return pts[0].1;
        }
        if t >= pts[pts.len() - 1].0 {
            return pts[pts.len() - 1].1;
        }
        let i = pts.partition_point(|(x, _)| *x <= t);
        let (t0, v0) = pts[i - 1];
        let (t1, v1) = pts[i];
        v0 + (t - t0) * (v1 - v0) / (t1 - t0)
    }
}

impl NormalContraction {
    pub fn min_with(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::ConstructionError(format!("min_with needs alpha > 0, got {alpha}")));
        }
        Ok(NormalContraction::MinWith { alpha })
    }

    pub fn fold_at(beta: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::ConstructionError(format!("fold_at needs finite beta, got {beta}")));
        }
        Ok(NormalContraction::FoldAt { beta })
    }

    /// Scalar action of the contraction.
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            NormalContraction::Identity => t,
            NormalContraction::Negate => -t,
            NormalContraction::MinWith { alpha } => t.min(*alpha),
            NormalContraction::FoldAt { beta } => (t - beta).abs() - beta.abs(),
            NormalContraction::Piecewise(pl) => pl.eval(t),
        }
    }
}

/// Applies a contraction componentwise.
pub fn apply_contraction(c: &NormalContraction, f: &[f64]) -> Vec<f64> {
    f.iter().map(|&t| c.eval(t)).collect()
}

/// Wire forms fixing the canonical text serialization, e.g.
/// `{"kind":"power","c":2.0,"p":2.0}` and `{"kind":"min_with","alpha":1.0}`.
mod wire {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(tag = "kind", rename_all = "snake_case")]
    pub enum Scalar {
        Power { c: f64, p: f64 },
        Cosh { c: f64 },
        Capped { inner: Box<Scalar>, cap: f64 },
    }

    impl TryFrom<Scalar> for ScalarConvex {
        type Error = Error;
        fn try_from(w: Scalar) -> Result<ScalarConvex> {
            match w {
                Scalar::Power { c, p } => ScalarConvex::power(c, p),
                Scalar::Cosh { c } => ScalarConvex::cosh_minus_one(c),
                Scalar::Capped { inner, cap } => {
                    ScalarConvex::capped(ScalarConvex::try_from(*inner)?, cap)
                }
            }
        }
    }

    impl From<ScalarConvex> for Scalar {
        fn from(w: ScalarConvex) -> Scalar {
            match w {
                ScalarConvex::ScaledPower { c, p } => Scalar::Power { c, p },
                ScalarConvex::CoshMinusOne { c } => Scalar::Cosh { c },
                ScalarConvex::Capped { inner, cap } => Scalar::Capped {
                    inner: Box::new(Scalar::from(*inner)),
                    cap,
                },
            }
        }
    }

    #[derive(Serialize, Deserialize)]
    #[serde(tag = "kind", rename_all = "snake_case")]
    pub enum Contraction {
        Identity,
        Negate,
        MinWith { alpha: f64 },
        FoldAt { beta: f64 },
        Piecewise { points: Vec<(f64, f64)> },
    }

    impl TryFrom<Contraction> for NormalContraction {
        type Error = Error;
        fn try_from(c: Contraction) -> Result<NormalContraction> {
            match c {
                Contraction::Identity => Ok(NormalContraction::Identity),
                Contraction::Negate => Ok(NormalContraction::Negate),
                Contraction::MinWith { alpha } => NormalContraction::min_with(alpha),
                Contraction::FoldAt { beta } => NormalContraction::fold_at(beta),
                Contraction::Piecewise { points } => {
                    Ok(NormalContraction::Piecewise(PiecewiseLinear::new(points)?))
                }
            }
        }
    }

    impl From<NormalContraction> for Contraction {
        fn from(c: NormalContraction) -> Contraction {
            match c {
                NormalContraction::Identity => Contraction::Identity,
                NormalContraction::Negate => Contraction::Negate,
                NormalContraction::MinWith { alpha } => Contraction::MinWith { alpha },
                NormalContraction::FoldAt { beta } => Contraction::FoldAt { beta },
                NormalContraction::Piecewise(pl) => Contraction::Piecewise { points: pl.points },
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent conjugate oracle: dense scan of `s t - w(t)` over
    /// `[-range, range]`, one refinement pass around the best point.
    fn conjugate_oracle(w: &ScalarConvex, s: f64, range: f64) -> f64 {
        let scan = |lo: f64, hi: f64, n: usize| -> (f64, f64) {
            let mut best = (0.0, f64::NEG_INFINITY);
            for i in 0..=n {
                let t = lo + (hi - lo) * (i as f64) / (n as f64);
                let v = s * t - eval_scalar(w, t).to_float();
                if v > best.1 {
                    best = (t, v);
                }
            }
            best
        };
        let (t0, _) = scan(-range, range, 4096);
        let h = 2.0 * range / 4096.0;
        scan(t0 - h, t0 + h, 4096).1.max(0.0)
    }

    #[test]
    fn eval_examples() {
        let w = ScalarConvex::power(2.0, 2.0).unwrap();
        assert_eq!(eval_scalar(&w, 3.0), ExtNonNeg::finite(9.0));
        let cosh = ScalarConvex::cosh_minus_one(1.0).unwrap();
        assert_eq!(eval_scalar(&cosh, 0.0), ExtNonNeg::finite(0.0));
        let capped = ScalarConvex::capped(ScalarConvex::power(1.0, 2.0).unwrap(), 1.0).unwrap();
        assert_eq!(eval_scalar(&capped, 2.0), ExtNonNeg::Infinite);
        assert_eq!(eval_scalar(&capped, 1.0), ExtNonNeg::finite(0.5));
    }

    #[test]
    fn subdifferential_examples() {
        let abs = ScalarConvex::power(1.0, 1.0).unwrap();
        assert_eq!(scalar_subdifferential(&abs, 0.0).unwrap(), (-1.0, 1.0));
        let sq = ScalarConvex::power(2.0, 2.0).unwrap();
        assert_eq!(scalar_subdifferential(&sq, 3.0).unwrap(), (6.0, 6.0));
        let capped = ScalarConvex::capped(sq, 2.0).unwrap();
        assert_eq!(scalar_subdifferential(&capped, 1.0).unwrap(), (2.0, 2.0));
        assert!(matches!(
            scalar_subdifferential(&capped, 2.0),
            Err(Error::DomainBoundary(_))
        ));
    }

    #[test]
    fn conjugate_closed_forms() {
        // (1/2) t^2 is self-dual.
        let w = ScalarConvex::power(1.0, 2.0).unwrap();
        assert!((scalar_conjugate(&w, 1.0).to_float() - 0.5).abs() < 1e-12);
        // |t|: slope indicator.
        let abs = ScalarConvex::power(1.0, 1.0).unwrap();
        assert_eq!(scalar_conjugate(&abs, 0.5), ExtNonNeg::finite(0.0));
        assert_eq!(scalar_conjugate(&abs, 2.0), ExtNonNeg::Infinite);
        // cosh - 1 at 0.
        let cosh = ScalarConvex::cosh_minus_one(1.0).unwrap();
        assert_eq!(scalar_conjugate(&cosh, 0.0), ExtNonNeg::finite(0.0));
        // Capped quadratic: sup over [-1, 1] of 3t - t^2/2 sits at the wall.
        let capped = ScalarConvex::capped(ScalarConvex::power(1.0, 2.0).unwrap(), 1.0).unwrap();
        assert!((scalar_conjugate(&capped, 3.0).to_float() - 2.5).abs() < 1e-9);
    }

    #[test]
    fn conjugate_matches_numeric_oracle() {
        // Scan ranges are sized past each case's maximizer (for the flat
        // power case at s=-2 the sup sits at t=-16).
        let cases = [
            (ScalarConvex::power(1.0, 2.0).unwrap(), 1.0, 12.0),
            (ScalarConvex::power(2.0, 2.0).unwrap(), 3.0, 12.0),
            (ScalarConvex::power(0.5, 1.5).unwrap(), -2.0, 40.0),
            (ScalarConvex::power(3.0, 3.0).unwrap(), 4.0, 12.0),
            (ScalarConvex::cosh_minus_one(1.0).unwrap(), 2.0, 12.0),
            (ScalarConvex::cosh_minus_one(0.5).unwrap(), -3.0, 12.0),
            (
                ScalarConvex::capped(ScalarConvex::power(1.0, 2.0).unwrap(), 1.0).unwrap(),
                3.0,
                12.0,
            ),
            (
                ScalarConvex::capped(ScalarConvex::cosh_minus_one(2.0).unwrap(), 2.0).unwrap(),
                1.5,
                12.0,
            ),
        ];
        for (w, s, range) in cases {
            let got = scalar_conjugate(&w, s).to_float();
            let want = conjugate_oracle(&w, s, range);
            assert!(
                (got - want).abs() <= 1e-5 * (1.0 + want.abs()),
                "conjugate mismatch for {w:?} at s={s}: got {got}, oracle {want}"
            );
        }
    }

    #[test]
    fn conjugate_round_trip_smooth_powers() {
        // w** = w for lsc convex w; checked through the numeric oracle applied
        // to the analytic conjugate.
        for (c, p, t) in [(1.0, 2.0, 0.7), (2.0, 2.0, -1.3), (0.5, 3.0, 1.1), (4.0, 1.5, 0.4)] {
            let w = ScalarConvex::power(c, p).unwrap();
            let q = p / (p - 1.0);
            let dual = ScalarConvex::power(c.powf(1.0 - q), q).unwrap(); // w* = (c^(1-q)/q)|s|^q
            let back = conjugate_oracle(&dual, t, 16.0);
            let direct = eval_scalar(&w, t).to_float();
            assert!(
                (back - direct).abs() <= 1e-6 * (1.0 + direct),
                "round trip failed for c={c} p={p} t={t}: {back} vs {direct}"
            );
        }
    }

    #[test]
    fn capped_of_zero_inner_acts_as_pure_cap() {
        // Zero inner energy with a cap: conjugate is cap * |s|.
        let w = ScalarConvex::capped(ScalarConvex::power(0.0, 2.0).unwrap(), 1.5).unwrap();
        assert!(!w.is_identically_zero());
        assert!((scalar_conjugate(&w, 2.0).to_float() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn contraction_construction_errors() {
        assert!(NormalContraction::min_with(0.0).is_err());
        assert!(PiecewiseLinear::new(vec![(0.0, 0.0), (1.0, 2.0)]).is_err()); // slope 2
        assert!(PiecewiseLinear::new(vec![(-1.0, 0.5), (1.0, 0.5)]).is_err()); // value at 0
        assert!(PiecewiseLinear::new(vec![(1.0, 0.0), (0.0, 0.0)]).is_err()); // unsorted
        assert!(PiecewiseLinear::new(vec![(-1.0, -1.0), (0.0, 0.0), (2.0, 1.0)]).is_ok());
    }

    #[test]
    fn contraction_actions() {
        let min1 = NormalContraction::min_with(1.0).unwrap();
        assert_eq!(apply_contraction(&min1, &[2.0, -3.0, 0.5]), vec![1.0, -3.0, 0.5]);
        let fold = NormalContraction::fold_at(1.0).unwrap();
        assert_eq!(fold.eval(0.0), 0.0);
        assert_eq!(fold.eval(2.0), 0.0);
        assert_eq!(fold.eval(-1.0), 1.0);
        let pl = PiecewiseLinear::new(vec![(-2.0, -1.0), (0.0, 0.0), (1.0, 0.5)]).unwrap();
        let c = NormalContraction::Piecewise(pl);
        assert_eq!(c.eval(-5.0), -1.0); // constant extension
        assert_eq!(c.eval(4.0), 0.5);
        assert!((c.eval(0.5) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn serialization_canonical_tags() {
        let w = ScalarConvex::power(2.0, 2.0).unwrap();
        assert_eq!(
            serde_json::to_string(&w).unwrap(),
            r#"{"kind":"power","c":2.0,"p":2.0}"#
        );
        let c = NormalContraction::min_with(1.0).unwrap();
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"kind":"min_with","alpha":1.0}"#
        );
        let round: ScalarConvex =
            serde_json::from_str(r#"{"kind":"capped","inner":{"kind":"cosh","c":1.0},"cap":2.0}"#)
                .unwrap();
        assert_eq!(round, ScalarConvex::capped(ScalarConvex::cosh_minus_one(1.0).unwrap(), 2.0).unwrap());
        // Validation runs on deserialize too.
        assert!(serde_json::from_str::<ScalarConvex>(r#"{"kind":"power","c":-1.0,"p":2.0}"#).is_err());
    }
}
