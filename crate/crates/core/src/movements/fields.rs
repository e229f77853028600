//! Constructors for the two speed fields used throughout: moving a simplicial
//! vertex orthogonally to a ridge span, and perturbing the extra generator of
//! a cube-plus-one-segment zonotope.

use nalgebra::DVector;

use crate::criticality::local_symmetry_check;
use crate::error::Error;
use crate::geom::Polytope;
use crate::linalg::hyperplane_normal;
use crate::Result;

use super::SpeedField;

/// Speed field moving one simplicial vertex (speed 1) orthogonally to the
/// linear span of a ridge through it, all other vertices at rest.
///
/// Requires the isotropic position and the local symmetry of the vertex star
/// across the ridge span; without that symmetry the interpolated field does
/// not factor through the projection and the construction fails.
///
/// With `odd` the centrally opposite vertex moves with speed -1, keeping the
/// deformation inside the class of centrally symmetric bodies.
pub fn vertex_move_field(
    polytope: &Polytope,
    vertex_id: usize,
    ridge_id: usize,
    odd: bool,
) -> Result<SpeedField> {
    let ridge = polytope.ridge(ridge_id);
    if !ridge.vertex_ids.contains(&vertex_id) {
        return Err(Error::InvalidMovement(format!(
            "ridge {ridge_id} does not contain vertex {vertex_id}"
        )));
    }
    let checks = local_symmetry_check(polytope, vertex_id)?;
    let symmetric = checks
        .iter()
        .find(|(rid, _)| *rid == ridge_id)
        .map(|&(_, ok)| ok)
        .unwrap_or(false);
    if !symmetric {
        return Err(Error::FactoringFailure(format!(
            "facet star of vertex {vertex_id} is not symmetric across the span of ridge {ridge_id}"
        )));
    }
    let ridge_pts: Vec<DVector<f64>> = ridge
        .vertex_ids
        .iter()
        .map(|&i| polytope.vertex(i).clone())
        .collect();
    let direction = hyperplane_normal(&ridge_pts, polytope.tol())?;
    let mut speeds = vec![0.0; polytope.vertices().len()];
    speeds[vertex_id] = 1.0;
    if odd {
        let center = polytope.symmetry_center().ok_or_else(|| {
            Error::InvalidMovement("odd field requires a centrally symmetric body".into())
        })?;
        let opposite = polytope
            .mirror_vertex(vertex_id, &center)
            .ok_or_else(|| Error::InvalidMovement("vertex has no central partner".into()))?;
        speeds[opposite] = -1.0;
    }
    SpeedField::new(polytope, direction, speeds, odd)
}

/// The family `C_n + [-(z + t(e_i - e_j)), z + t(e_i - e_j)]` realized as
/// vertex speeds on the V-representation of `C_n + [-z, z]`.
///
/// Returns the start body, the field (odd by construction) and the validity
/// interval `[-z_i, z_j]` on which the perturbed generator stays nonnegative.
pub fn zonotope_move_field(
    z: &DVector<f64>,
    i: usize,
    j: usize,
) -> Result<(Polytope, SpeedField, [f64; 2])> {
    let n = z.len();
    if !(i < j && j < n) {
        return Err(Error::InvalidMovement(format!(
            "need indices i < j < {n}, got ({i}, {j})"
        )));
    }
    if z.iter().any(|&c| c < 0.0) {
        return Err(Error::InvalidMovement("generator must be nonnegative".into()));
    }
    if z[i] <= 0.0 || z[j] <= 0.0 {
        // With a zero coordinate in the moving pair the body sits on a
        // combinatorial boundary and its vertices cannot carry the generator
        // family; this also covers the degenerate interval z = 0.
        return Err(Error::InvalidMovement(format!(
            "vertex realization needs z[{i}] > 0 and z[{j}] > 0, got {} and {}",
            z[i], z[j]
        )));
    }

    // Sign-point enumeration of the m = n + 1 generators e_1..e_n, z.
    let sign_points: Vec<(Vec<f64>, f64)> = (0..1usize << (n + 1))
        .map(|mask| {
            let mut p = vec![0.0; n];
            for (k, coord) in p.iter_mut().enumerate() {
                *coord = if mask >> k & 1 == 1 { 1.0 } else { -1.0 };
            }
            let eps = if mask >> n & 1 == 1 { 1.0 } else { -1.0 };
            for (k, coord) in p.iter_mut().enumerate() {
                *coord += eps * z[k];
            }
            (p, eps)
        })
        .collect();
    let pts: Vec<DVector<f64>> = sign_points
        .iter()
        .map(|(p, _)| DVector::from_column_slice(p))
        .collect();
    let body = Polytope::from_points(&pts, n)?;

    // Each vertex of a zonotope has a unique sign vector; its speed is the
    // sign it uses for the perturbed generator.
    let mut speeds = Vec::with_capacity(body.vertices().len());
    for vert in body.vertices() {
        let mut eps_found: Option<f64> = None;
        for ((_, eps), pt) in sign_points.iter().zip(&pts) {
            if (pt - vert).norm() <= 10.0 * body.tol() {
                match eps_found {
                    None => eps_found = Some(*eps),
                    Some(prev) if prev != *eps => {
                        return Err(Error::InvalidMovement(
                            "ambiguous sign vector for a vertex; generators degenerate".into(),
                        ))
                    }
                    _ => {}
                }
            }
        }
        let eps = eps_found.ok_or_else(|| {
            Error::InvalidMovement("hull vertex does not match any sign point".into())
        })?;
        speeds.push(eps * 2.0_f64.sqrt());
    }
    let mut direction = DVector::zeros(n);
    direction[i] = 1.0;
    direction[j] = -1.0;
    let field = SpeedField::new(&body, direction, speeds, true)?;
    Ok((body, field, [-z[i], z[j]]))
}
