//! On-disk JSON documents: network files and labeled vector files.
//!
//! A network document lists vertices, edge terms, hyperedge terms, Dirichlet
//! labels, identification pairs, and an optional boundary-point flag:
//!
//! ```json
//! {
//!   "vertices": ["x", "y"],
//!   "edges": [{"u": "x", "v": "y", "w": {"kind": "power", "c": 2.0, "p": 2.0}}],
//!   "hyperedges": [{"vertices": ["x", "y"], "mu": 0.5}],
//!   "dirichlet": ["y"],
//!   "identify": [["x", "y"]],
//!   "boundary": true
//! }
//! ```
//!
//! Weights use the scalar wire encoding (`power`, `cosh`, `capped`). A vector
//! document is a plain object of per-vertex values, `{"x": 1.0, "y": 0.0}`;
//! identified vertices must agree and every vertex must be covered.
//!
//! Unknown fields are rejected, and `render` followed by `parse` is the
//! identity, so canonical files stay byte-stable.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::convex::ScalarConvex;
use crate::forms::{DualVector, NetworkForm, VertexVector};
use crate::verify::SumSquareProbe;
use crate::{Error, Result};

/// One edge term of a network document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub u: String,
    pub v: String,
    pub w: ScalarConvex,
}

/// One hyperedge term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperedgeEntry {
    pub vertices: Vec<String>,
    pub mu: f64,
}

/// Replacement energy `coeff (f(u) + f(v))^2` for contraction checks: a
/// deliberately incompatible functional proving the checker can fail. Only
/// the verification front end reads this; every other command ignores it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NegativeControlEntry {
    pub u: String,
    pub v: String,
    pub coeff: f64,
}

/// Parsed network document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub vertices: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges: Vec<EdgeEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hyperedges: Vec<HyperedgeEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dirichlet: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub identify: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub boundary: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub negative_control: Option<NegativeControlEntry>,
}

impl NetworkFile {
    /// Parses a JSON document; errors carry the line/column context from the
    /// underlying parser.
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("network file: {e}")))
    }

    /// Canonical serialization; `parse` of the result reproduces `self`.
    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("document types always serialize")
    }

    /// Builds the energy: constructor terms, then identifications, then the
    /// Dirichlet restriction, then the optional boundary point.
    pub fn to_form(&self) -> Result<NetworkForm> {
        let edges = self
            .edges
            .iter()
            .map(|e| (e.u.clone(), e.v.clone(), e.w.clone()))
            .collect();
        let hyperedges = self
            .hyperedges
            .iter()
            .map(|h| (h.vertices.clone(), h.mu))
            .collect();
        let mut form = NetworkForm::mixed(self.vertices.clone(), edges, hyperedges)?;
        if !self.identify.is_empty() {
            let pairs: Vec<(&str, &str)> = self
                .identify
                .iter()
                .map(|(a, b)| (a.as_str(), b.as_str()))
                .collect();
            form = form.identify(&pairs)?;
        }
        if !self.dirichlet.is_empty() {
            let labels: Vec<&str> = self.dirichlet.iter().map(|s| s.as_str()).collect();
            form = form.restrict_dirichlet(&labels)?;
        }
        if self.boundary {
            form = form.adjoin_boundary_point()?;
        }
        Ok(form)
    }

    /// The negative-control probe on `form`'s coordinate classes, if the
    /// document declares one.
    pub fn negative_probe(&self, form: &NetworkForm) -> Result<Option<SumSquareProbe>> {
        match &self.negative_control {
            None => Ok(None),
            Some(nc) => {
                let u = form.class_of(&nc.u)?;
                let v = form.class_of(&nc.v)?;
                Ok(Some(SumSquareProbe::new(form.class_count(), u, v, nc.coeff)?))
            }
        }
    }
}

fn parse_assignments(text: &str) -> Result<BTreeMap<String, f64>> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("vector file: {e}")))
}

/// Parses a vector document against `form`'s vertex set.
pub fn parse_vertex_vector(form: &NetworkForm, text: &str) -> Result<VertexVector> {
    VertexVector::from_labeled(form, &parse_assignments(text)?)
}

/// Parses a vector document as a linear functional on `form`'s classes.
pub fn parse_dual_vector(form: &NetworkForm, text: &str) -> Result<DualVector> {
    DualVector::from_labeled(form, &parse_assignments(text)?)
}
