//! One-parameter deformations `K_t = {x + t beta(pi(x)) v | x in K}` driven by
//! piecewise-affine speed fields, their validity bookkeeping, and scans of the
//! isotropic constant along the deformation.
//!
//! The speed field is stored as one value per vertex; the deformed body is the
//! hull of the displaced vertices. That hull equals the pointwise image as
//! long as no displaced vertex falls strictly inside and fibers along the
//! direction do not cross; `move_body` checks both.

mod fields;
#[cfg(test)]
mod tests;

pub use fields::{vertex_move_field, zonotope_move_field};

use nalgebra::DVector;
use rayon::prelude::*;

use crate::error::Error;
use crate::geom::Polytope;
use crate::isotropy::isotropic_constant;
use crate::linalg::affine_fit_residual;
use crate::Result;

/// Speed residual below which a field counts as affine (and the induced
/// deformation moves through affine images only).
pub const AFFINE_RESIDUAL_TOL: f64 = 1e-9;

/// A deformation direction together with one speed per polytope vertex.
#[derive(Debug, Clone)]
pub struct SpeedField {
    direction: DVector<f64>,
    speeds: Vec<f64>,
    odd: bool,
}

impl SpeedField {
    /// Validate and build a field for `polytope`.
    ///
    /// Vertices with equal projections onto the direction's orthogonal
    /// complement must carry equal speeds (the field factors through that
    /// projection); an odd field additionally requires a centrally symmetric
    /// body and antisymmetric speeds.
    pub fn new(
        polytope: &Polytope,
        direction: DVector<f64>,
        speeds: Vec<f64>,
        odd: bool,
    ) -> Result<Self> {
        let norm = direction.norm();
        if norm <= 0.0 || !norm.is_finite() {
            return Err(Error::InvalidMovement("zero direction".into()));
        }
        let direction = direction / norm;
        if speeds.len() != polytope.vertices().len() {
            return Err(Error::InvalidMovement(format!(
                "{} speeds for {} vertices",
                speeds.len(),
                polytope.vertices().len()
            )));
        }
        let tol = 10.0 * polytope.tol();
        let speed_scale = speeds.iter().fold(0.0_f64, |m, s| m.max(s.abs()));
        let proj: Vec<DVector<f64>> = polytope
            .vertices()
            .iter()
            .map(|x| x - &direction * direction.dot(x))
            .collect();
        for i in 0..proj.len() {
            for j in (i + 1)..proj.len() {
                if (&proj[i] - &proj[j]).norm() <= tol
                    && (speeds[i] - speeds[j]).abs() > 1e-9 * (1.0 + speed_scale)
                {
                    return Err(Error::FactoringFailure(format!(
                        "vertices {i} and {j} share a fiber but carry speeds {} and {}",
                        speeds[i], speeds[j]
                    )));
                }
            }
        }
        if odd {
            let center = polytope.symmetry_center().ok_or_else(|| {
                Error::InvalidMovement("odd field requires a centrally symmetric body".into())
            })?;
            for i in 0..speeds.len() {
                let j = polytope.mirror_vertex(i, &center).ok_or_else(|| {
                    Error::InvalidMovement("vertex has no central partner".into())
                })?;
                if (speeds[i] + speeds[j]).abs() > 1e-9 * (1.0 + speed_scale) {
                    return Err(Error::InvalidMovement(format!(
                        "odd field: speeds at paired vertices {i}, {j} are not negatives"
                    )));
                }
            }
        }
        Ok(Self {
            direction,
            speeds,
            odd,
        })
    }

    pub fn direction(&self) -> &DVector<f64> {
        &self.direction
    }

    pub fn speeds(&self) -> &[f64] {
        &self.speeds
    }

    pub fn odd(&self) -> bool {
        self.odd
    }

    /// Least-squares residual of an affine fit to the (vertex, speed) samples.
    pub fn affine_residual(&self, polytope: &Polytope) -> f64 {
        affine_fit_residual(polytope.vertices(), &self.speeds)
    }

    /// Affine speed fields deform through affine images, so the isotropic
    /// constant stays exactly flat along them.
    pub fn is_affine(&self, polytope: &Polytope) -> bool {
        self.affine_residual(polytope) <= AFFINE_RESIDUAL_TOL
    }
}

/// Result of sampling a deformation over a time grid.
#[derive(Debug, Clone)]
pub struct MovementScan {
    pub ts: Vec<f64>,
    /// Isotropic constants; NaN where the sample is invalid.
    pub ls: Vec<f64>,
    pub valid: Vec<bool>,
    pub volumes: Vec<f64>,
    /// Index range (inclusive) of the largest valid run containing t = 0.
    pub window: (usize, usize),
    /// Minimum centered second difference of `L` over the window interior;
    /// `None` when the window has no interior points.
    pub convexity_certificate: Option<f64>,
}

impl MovementScan {
    /// Rows `(t, L, valid, volume)` for CSV-style output.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, bool, f64)> + '_ {
        (0..self.ts.len()).map(move |i| (self.ts[i], self.ls[i], self.valid[i], self.volumes[i]))
    }
}

/// The deformed body at time `t`: hull of the displaced vertices.
pub fn move_body(polytope: &Polytope, field: &SpeedField, t: f64) -> Result<Polytope> {
    if field.speeds.len() != polytope.vertices().len() {
        return Err(Error::InvalidMovement("field does not match polytope".into()));
    }
    let v = &field.direction;
    let displaced: Vec<DVector<f64>> = polytope
        .vertices()
        .iter()
        .zip(&field.speeds)
        .map(|(x, &s)| x + v * (t * s))
        .collect();

    // Fibers along the direction must keep their ordering.
    let tol = 10.0 * polytope.tol();
    let heights: Vec<f64> = polytope.vertices().iter().map(|x| v.dot(x)).collect();
    let proj: Vec<DVector<f64>> = polytope
        .vertices()
        .iter()
        .map(|x| x - v * v.dot(x))
        .collect();
    for i in 0..proj.len() {
        for j in (i + 1)..proj.len() {
            if (&proj[i] - &proj[j]).norm() <= tol {
                let before = heights[i] - heights[j];
                let after = v.dot(&displaced[i]) - v.dot(&displaced[j]);
                if before.abs() > tol && after.signum() != before.signum() && after.abs() > tol {
                    return Err(Error::InvalidMovement(format!(
                        "fiber ordering of vertices {i}, {j} flipped at t = {t}"
                    )));
                }
            }
        }
    }

    let moved = Polytope::from_points(&displaced, polytope.dim())
        .map_err(|e| Error::InvalidMovement(format!("hull failed at t = {t}: {e}")))?;
    // Displaced vertices may land on the boundary (faces can merge at the
    // ends of the validity interval) but must not fall strictly inside.
    for d in &displaced {
        if moved.boundary_clearance(d) > 10.0 * moved.tol() {
            return Err(Error::InvalidMovement(format!(
                "a displaced vertex is interior at t = {t}; the vertexwise image no longer \
                 represents the deformation"
            )));
        }
    }
    Ok(moved)
}

/// Sample `L(K_t)` on an even grid over `[t_min, t_max]` (both ends included)
/// and certify convexity on the largest valid window around `t = 0`.
///
/// Invalid samples are kept in the output with `valid = false` and NaN values.
pub fn scan(
    polytope: &Polytope,
    field: &SpeedField,
    t_min: f64,
    t_max: f64,
    steps: usize,
) -> Result<MovementScan> {
    if !(t_min < t_max) || steps < 3 {
        return Err(Error::InvalidMovement(
            "need t_min < t_max and at least 3 grid points".into(),
        ));
    }
    let ts: Vec<f64> = (0..steps)
        .map(|k| t_min + (t_max - t_min) * k as f64 / (steps - 1) as f64)
        .collect();
    let samples: Vec<Option<(f64, f64)>> = ts
        .par_iter()
        .map(|&t| {
            let body = move_body(polytope, field, t).ok()?;
            let report = isotropic_constant(&body).ok()?;
            Some((report.l, report.volume))
        })
        .collect();
    let mut ls = vec![f64::NAN; steps];
    let mut volumes = vec![f64::NAN; steps];
    let mut valid = vec![false; steps];
    for (k, s) in samples.iter().enumerate() {
        if let Some((l, vol)) = s {
            ls[k] = *l;
            volumes[k] = *vol;
            valid[k] = true;
        }
    }
    let anchor = (0..steps)
        .min_by(|&a, &b| ts[a].abs().total_cmp(&ts[b].abs()))
        .unwrap();
    let window = if valid[anchor] {
        let mut lo = anchor;
        let mut hi = anchor;
        while lo > 0 && valid[lo - 1] {
            lo -= 1;
        }
        while hi + 1 < steps && valid[hi + 1] {
            hi += 1;
        }
        (lo, hi)
    } else {
        (anchor, anchor)
    };
    let convexity_certificate = if window.1 - window.0 >= 2 {
        Some(
            (window.0 + 1..window.1)
                .map(|k| ls[k - 1] - 2.0 * ls[k] + ls[k + 1])
                .fold(f64::INFINITY, f64::min),
        )
    } else {
        None
    };
    Ok(MovementScan {
        ts,
        ls,
        valid,
        volumes,
        window,
        convexity_certificate,
    })
}
