//! Convex-geometry toolkit for isotropic constants of low-dimensional polytopes.
//!
//! The crate computes exact (closed-form) moments of the uniform distribution
//! on a polytope and on its facets, normalizes bodies into isotropic position,
//! evaluates facet-level first-order criticality data, runs one-parameter
//! deformation scans (RS/SRS-movements) and searches the `(n+1)`-generator
//! zonotope family for extremal isotropic constants.
//!
//! Everything is double precision and intended for desk scale: dimensions 2–5,
//! a few hundred vertices at most. Hulls are found by brute-force hyperplane
//! enumeration, moments by barycentric Dirichlet formulas; no quadrature is
//! involved anywhere.

pub mod criticality;
pub mod error;
pub mod geom;
pub mod isotropy;
pub mod linalg;
pub mod moments;
pub mod movements;
pub mod zonotopes;

pub use error::Error;
pub use geom::{Facet, Polytope, PolytopeDef, Ridge, Simplex};
pub use isotropy::{IsotropicReport, ReferenceFamily};
pub use linalg::AffineMap;
pub use moments::{BodyMoments, FacetMoments};
pub use movements::{MovementScan, SpeedField};
pub use zonotopes::{Zonotope, ZonotopeDef};

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
