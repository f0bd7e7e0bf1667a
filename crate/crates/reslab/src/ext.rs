//! Extended nonnegative values: `[0, +inf]` with infinity as a real variant.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

/// A value in `[0, +inf]`.
///
/// Finite payloads are always nonnegative, non-NaN floats; arithmetic saturates
/// at infinity. Serializes as a plain JSON number when finite and as
/// `{"inf": true}` when infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtNonNeg {
    Finite(f64),
    Infinite,
}

impl ExtNonNeg {
    /// Wraps a finite value. Panics on NaN or negative input: the callers in
    /// this crate construct these from energies and suprema that are
    /// nonnegative by definition, so a violation is a bug, not data.
    pub fn finite(v: f64) -> Self {
        assert!(v.is_finite() && v >= 0.0, "not a finite nonnegative value: {v}");
        ExtNonNeg::Finite(v)
    }

    /// Classifies a raw float: `+inf` maps to `Infinite`.
    pub fn from_float(v: f64) -> Self {
        if v == f64::INFINITY {
            ExtNonNeg::Infinite
        } else {
            ExtNonNeg::finite(v)
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtNonNeg::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtNonNeg::Infinite)
    }

    /// Finite payload, if any.
    pub fn as_finite(self) -> Option<f64> {
        match self {
            ExtNonNeg::Finite(v) => Some(v),
            ExtNonNeg::Infinite => None,
        }
    }

    /// Collapses to a float, with `+inf` for the infinite variant. Intended
    /// for numeric comparisons, not for storage.
    pub fn to_float(self) -> f64 {
        match self {
            ExtNonNeg::Finite(v) => v,
            ExtNonNeg::Infinite => f64::INFINITY,
        }
    }

    /// Saturating scalar multiple by `c >= 0`. `0 * inf` is 0 here: the uses
    /// are sums of weighted terms where a zero weight means the term is absent.
    pub fn scale(self, c: f64) -> Self {
        assert!(c.is_finite() && c >= 0.0);
        match self {
            ExtNonNeg::Finite(v) => ExtNonNeg::finite(c * v),
            ExtNonNeg::Infinite if c == 0.0 => ExtNonNeg::finite(0.0),
            ExtNonNeg::Infinite => ExtNonNeg::Infinite,
        }
    }
}

impl Add for ExtNonNeg {
    type Output = ExtNonNeg;
    fn add(self, rhs: ExtNonNeg) -> ExtNonNeg {
        match (self, rhs) {
            (ExtNonNeg::Finite(a), ExtNonNeg::Finite(b)) => ExtNonNeg::finite(a + b),
            _ => ExtNonNeg::Infinite,
        }
    }
}

impl PartialOrd for ExtNonNeg {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        // Total on [0, inf]: payloads are never NaN.
        Some(match (self, other) {
            (ExtNonNeg::Finite(a), ExtNonNeg::Finite(b)) => a.partial_cmp(b).unwrap(),
            (ExtNonNeg::Finite(_), ExtNonNeg::Infinite) => Ordering::Less,
            (ExtNonNeg::Infinite, ExtNonNeg::Finite(_)) => Ordering::Greater,
            (ExtNonNeg::Infinite, ExtNonNeg::Infinite) => Ordering::Equal,
        })
    }
}

impl fmt::Display for ExtNonNeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNonNeg::Finite(v) => write!(f, "{v:?}"),
            ExtNonNeg::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for ExtNonNeg {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtNonNeg::Finite(v) => s.serialize_f64(*v),
            ExtNonNeg::Infinite => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("inf", &true)?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for ExtNonNeg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = ExtNonNeg;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a nonnegative number or {\"inf\": true}")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<ExtNonNeg, E> {
                if v.is_finite() && v >= 0.0 {
                    Ok(ExtNonNeg::Finite(v))
                } else {
                    Err(E::custom(format!("not a finite nonnegative number: {v}")))
                }
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExtNonNeg, E> {
                self.visit_f64(v as f64)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExtNonNeg, E> {
                self.visit_f64(v as f64)
            }
            fn visit_map<M: MapAccess<'de>>(
                self,
                mut m: M,
            ) -> std::result::Result<ExtNonNeg, M::Error> {
                let mut inf = false;
                while let Some((k, v)) = m.next_entry::<String, bool>()? {
                    if k == "inf" && v {
                        inf = true;
                    } else {
                        return Err(de::Error::custom(format!("unexpected field `{k}`")));
                    }
                }
                if inf {
                    Ok(ExtNonNeg::Infinite)
                } else {
                    Err(de::Error::custom("expected {\"inf\": true}"))
                }
            }
        }
        d.deserialize_any(V)
    }
}
