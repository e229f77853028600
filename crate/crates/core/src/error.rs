//! Error taxonomy shared by all modules.

use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input point set does not affinely span the requested dimension, or the
    /// dimension is outside the supported range.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A simplex with (numerically) zero volume was passed to a moment formula.
    #[error("degenerate simplex: zero {0}-volume")]
    DegenerateSimplex(usize),

    /// Covariance matrix is too ill-conditioned to invert its square root.
    #[error("covariance condition number exceeds 1e12; cannot isotropize")]
    NearSingularCovariance,

    /// Operation requires the body in isotropic position (mean 0, covariance I).
    #[error(
        "polytope is not in isotropic position (deviation {deviation:.3e} > {tolerance:.0e}); \
         run isotropize first"
    )]
    NotIsotropic { deviation: f64, tolerance: f64 },

    /// Operation requires a simplicial vertex.
    #[error("vertex {0} is not simplicial (some incident facet is not a simplex)")]
    NotSimplicialVertex(usize),

    /// The rigid repositioning of a ridge onto a coordinate hyperplane failed.
    #[error("frame failure: {0}")]
    FrameFailure(String),

    /// A requested speed field does not factor through the projection along
    /// its direction.
    #[error("speed field does not factor: {0}")]
    FactoringFailure(String),

    /// A deformation left its validity region, or a speed field is malformed.
    #[error("invalid movement: {0}")]
    InvalidMovement(String),

    /// Zonotope generators do not linearly span the ambient space.
    #[error("zonotope generators do not span R^{0}")]
    SpanDeficient(usize),

    /// Generator matrix of an (n+1)-generator zonotope has rank below n.
    #[error("generator matrix is rank deficient")]
    RankDeficient,
}
