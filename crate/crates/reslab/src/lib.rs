//! Convex energies on finite vertex sets.
//!
//! An energy here is a convex functional `E : R^X -> [0, +inf]` with `E(0) = 0`,
//! assembled from symmetric convex edge terms `w(f(u) - f(v))`, hyperedge terms
//! `mu * (max_K f - min_K f)^2`, Dirichlet pinning, vertex identification, and an
//! optional adjoined boundary vertex. On top of evaluation the crate computes the
//! quantities such energies are used for:
//!
//! * elementary resistance `R(x, y) = sup { f(x) - f(y) : E(f) <= 1 }`,
//! * tilted resistance `R_t(x, y) = sup { t (f(x) - f(y)) - E(f) }` for `t > 0`,
//! * the convex conjugate `E*(phi) = sup { <phi, f> - E(f) }`,
//! * Luxemburg and Orlicz gauges of `E`,
//! * inf-convolution approximants `E^(alpha, K)`,
//! * resistance matrices over all vertex pairs,
//!
//! plus a [`verify`] module of seeded property checkers (contraction compatibility,
//! triangle inequality, series additivity, homogeneous identities, ...) that report
//! worst violations with reproducible witnesses.
//!
//! Values that can be infinite ([`ExtNonNeg`]) carry infinity as a first-class
//! variant; no sentinel floats leak through the public API.

mod error;
mod ext;

pub mod convex;
pub mod forms;
pub mod io;
pub mod resistance;
pub mod solver;
pub mod verify;

pub use error::Error;
pub use ext::ExtNonNeg;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
