//! Isotropic constant, isotropic position transform, and closed-form
//! reference constants.
//!
//! The isotropic constant of a body `K` is the affine invariant defined by
//! `L^{2n} = det(cov) / vol^2`; a body is isotropic when its barycenter is 0
//! and its covariance is the identity.

use nalgebra::{DMatrix, DVector};

use crate::error::Error;
use crate::geom::{shapes, Polytope};
use crate::linalg::AffineMap;
use crate::moments::body_moments;
use crate::zonotopes;
use crate::Result;

/// Result of an isotropic-constant evaluation, together with the affine map
/// that was applied to the body (identity when none was).
#[derive(Debug, Clone)]
pub struct IsotropicReport {
    pub l: f64,
    pub volume: f64,
    pub det_cov: f64,
    pub transform: AffineMap,
}

/// `L = det(cov)^{1/(2n)} / vol^{1/n}` for the body as given.
pub fn isotropic_constant(polytope: &Polytope) -> Result<IsotropicReport> {
    let n = polytope.dim();
    let m = body_moments(polytope)?;
    let det_cov = m.covariance.determinant();
    if det_cov <= 0.0 {
        return Err(Error::NearSingularCovariance);
    }
    let l = det_cov.powf(1.0 / (2.0 * n as f64)) / m.volume.powf(1.0 / n as f64);
    Ok(IsotropicReport {
        l,
        volume: m.volume,
        det_cov,
        transform: AffineMap::identity(n),
    })
}

/// Map a body into isotropic position (mean 0, covariance I).
///
/// The transform is `x -> A^{-1/2} (x - mean)` with `A^{-1/2}` the symmetric
/// inverse square root of the covariance, computed by eigendecomposition.
/// The returned report describes the repositioned body.
pub fn isotropize(polytope: &Polytope) -> Result<(Polytope, IsotropicReport)> {
    let n = polytope.dim();
    let m = body_moments(polytope)?;
    let eig = m.covariance.clone().symmetric_eigen();
    let max_eig = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
    let min_eig = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min_eig > 1e-12 * max_eig) {
        return Err(Error::NearSingularCovariance);
    }
    let mut inv_sqrt = DMatrix::zeros(n, n);
    for i in 0..n {
        // Eigenvalue floor keeps the inverse root finite on near-degenerate input.
        let lambda = eig.eigenvalues[i].max(1e-14 * max_eig);
        inv_sqrt[(i, i)] = lambda.sqrt().recip();
    }
    let matrix = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose();
    let shift = -(&matrix * &m.mean);
    let transform = AffineMap { matrix, shift };
    let moved: Vec<DVector<f64>> = polytope.vertices().iter().map(|v| transform.apply(v)).collect();
    let iso = Polytope::from_points(&moved, n)?;
    let mut report = isotropic_constant(&iso)?;
    report.transform = transform;
    Ok((iso, report))
}

/// Families with known reference constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceFamily {
    Simplex,
    Cube,
    CrossPolytope,
    /// The cube with one extra diagonal generator, `C_n + [-(1,..,1), (1,..,1)]`.
    Q,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Closed-form isotropic constant of the `n`-simplex.
pub fn simplex_constant(n: usize) -> f64 {
    let nf = n as f64;
    factorial(n).powf(1.0 / nf) / ((nf + 1.0).powf((nf + 1.0) / (2.0 * nf)) * (nf + 2.0).sqrt())
}

/// Isotropic constant of any parallelepiped: `1/sqrt(12)`.
pub fn cube_constant() -> f64 {
    12.0_f64.sqrt().recip()
}

/// Closed-form isotropic constant of the `n`-dimensional cross-polytope.
pub fn cross_polytope_constant(n: usize) -> f64 {
    let nf = n as f64;
    factorial(n).powf(1.0 / nf) / (2.0_f64.sqrt() * (nf + 1.0).sqrt() * (nf + 2.0).sqrt())
}

/// Reference constant for one of the named families.
///
/// Simplex, cube and cross-polytope evaluate their closed forms; the `Q`
/// family has no closed form and is computed from the constructed body.
pub fn reference_constant(family: ReferenceFamily, n: usize) -> Result<f64> {
    assert!(n >= 2);
    match family {
        ReferenceFamily::Simplex => Ok(simplex_constant(n)),
        ReferenceFamily::Cube => Ok(cube_constant()),
        ReferenceFamily::CrossPolytope => Ok(cross_polytope_constant(n)),
        ReferenceFamily::Q => {
            let body = zonotopes::q_n(n).to_polytope()?;
            Ok(isotropic_constant(&body)?.l)
        }
    }
}

/// Build the prism `base x [-h, h]` and compare its measured constant against
/// the prediction `(L_base^{n-1} / sqrt(12))^{1/n}`.
///
/// Returns `(measured, predicted)`.
pub fn prism_check(base: &Polytope, half_height: f64) -> Result<(f64, f64)> {
    assert!(half_height > 0.0);
    let n = base.dim() + 1;
    let l_base = isotropic_constant(base)?.l;
    let prism = shapes::prism(base, half_height)?;
    let measured = isotropic_constant(&prism)?.l;
    let predicted = (l_base.powi((n - 1) as i32) / 12.0_f64.sqrt()).powf(1.0 / n as f64);
    Ok((measured, predicted))
}
