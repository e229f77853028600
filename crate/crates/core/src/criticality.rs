//! Facet-level first-order data for isotropic polytopes: defect vectors,
//! piecewise-affine test integrals, affine/Euclidean reflector detection, the
//! third-moment matrix, and local symmetry predicates.
//!
//! A facet `F` of an isotropic critical polytope satisfies
//! `E[|X|^2 X] = (n+2) E[X]` for `X` uniform on `F`; the defect vector is the
//! difference of the two sides.

use nalgebra::{DMatrix, DVector};

use crate::error::Error;
use crate::geom::Polytope;
use crate::linalg::{affine_rank, hyperplane_normal, reflect, span_basis, AffineMap};
use crate::moments::{body_moments, facet_moments};
use crate::Result;

/// Positioning tolerance on `|mean|` and `max |cov - I|` below which a body
/// counts as isotropic for the purposes of this module. Deliberately far
/// looser than the assertion tolerances used on the defects themselves.
pub const ISOTROPY_TOL: f64 = 1e-6;

/// Residual of the first-order condition on one facet.
#[derive(Debug, Clone)]
pub struct FacetDefect {
    pub facet_id: usize,
    /// `E[|X|^2 X] - (n+2) E[X]` for `X` uniform on the facet.
    pub defect: DVector<f64>,
    pub norm: f64,
}

/// Outcome of the reflector search on one ridge.
#[derive(Debug, Clone)]
pub struct ReflectorReport {
    pub ridge_id: usize,
    /// Some affine map fixes the ridge pointwise and swaps the two facets.
    pub is_affine: bool,
    /// That map can be taken to be the orthogonal reflection across the
    /// linear hyperplane spanned by the ridge (tested only for centered bodies).
    pub is_euclidean: bool,
    /// A witnessing map when `is_affine`.
    pub map: Option<AffineMap>,
}

/// Check the isotropic-position precondition shared by the operations below.
pub fn ensure_isotropic(polytope: &Polytope) -> Result<()> {
    let m = body_moments(polytope)?;
    let n = polytope.dim();
    let dev_cov = (m.covariance - DMatrix::identity(n, n)).abs().max();
    let deviation = dev_cov.max(m.mean.norm());
    if deviation > ISOTROPY_TOL {
        return Err(Error::NotIsotropic {
            deviation,
            tolerance: ISOTROPY_TOL,
        });
    }
    Ok(())
}

/// Defect vectors of all facets of an isotropic polytope.
pub fn facet_defects(polytope: &Polytope) -> Result<Vec<FacetDefect>> {
    ensure_isotropic(polytope)?;
    let n = polytope.dim();
    let mut out = Vec::with_capacity(polytope.facets().len());
    for facet_id in 0..polytope.facets().len() {
        let fm = facet_moments(polytope, facet_id)?;
        let defect = &fm.cubic_radial - &fm.mean * (n + 2) as f64;
        let norm = defect.norm();
        out.push(FacetDefect {
            facet_id,
            defect,
            norm,
        });
    }
    Ok(out)
}

/// True when every facet defect norm is at most `tolerance`.
pub fn detect_zero_defect(polytope: &Polytope, tolerance: f64) -> Result<bool> {
    Ok(facet_defects(polytope)?.iter().all(|d| d.norm <= tolerance))
}

/// Exact value of `int_F (|x|^2 - n - 2) f(x) dvol_{n-1}` for a function `f`
/// given by its values at the facet's vertices and interpolated affinely on
/// each triangulation simplex.
pub fn piecewise_affine_test(
    polytope: &Polytope,
    facet_id: usize,
    values: &[f64],
) -> Result<f64> {
    ensure_isotropic(polytope)?;
    let facet = polytope.facet(facet_id);
    assert_eq!(values.len(), facet.vertex_ids.len());
    let value_of = |vid: usize| -> f64 {
        let pos = facet.vertex_ids.iter().position(|&i| i == vid).unwrap();
        values[pos]
    };
    let n = polytope.dim() as f64;
    let mut integral = 0.0;
    for ids in polytope.triangulate_facet(facet_id) {
        let simplex = polytope.simplex(&ids);
        let w = simplex.measure();
        if w <= 0.0 {
            continue;
        }
        let verts = simplex.vertices();
        let m = verts.len();
        let k = simplex.k();
        let c3 = 1.0 / ((k + 1) * (k + 2) * (k + 3)) as f64;
        let mut gram = vec![vec![0.0; m]; m];
        for a in 0..m {
            for b in 0..m {
                gram[a][b] = verts[a].dot(&verts[b]);
            }
        }
        for (a, &vid) in ids.iter().enumerate() {
            let phi = value_of(vid);
            if phi == 0.0 {
                continue;
            }
            // E[lambda_a |X|^2] over the simplex.
            let mut quad = 0.0;
            for b in 0..m {
                for c in 0..m {
                    let mult = 1.0
                        + f64::from(a == b)
                        + f64::from(a == c)
                        + f64::from(b == c)
                        + 2.0 * f64::from(a == b && b == c);
                    quad += mult * gram[b][c];
                }
            }
            quad *= c3;
            integral += w * phi * (quad - (n + 2.0) / m as f64);
        }
    }
    Ok(integral)
}

/// Greedy bijective matching of two point sets within `tol`; `true` when it
/// exists.
fn sets_match(a: &[DVector<f64>], b: &[DVector<f64>], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    'outer: for p in a {
        for (i, q) in b.iter().enumerate() {
            if !used[i] && (p - q).norm() <= tol {
                used[i] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn vertex_set(polytope: &Polytope, ids: &[usize]) -> Vec<DVector<f64>> {
    ids.iter().map(|&i| polytope.vertex(i).clone()).collect()
}

/// Greedily pick an affinely independent subset of `points` of the requested
/// size.
fn affinely_independent_subset(points: &[DVector<f64>], count: usize, tol: f64) -> Vec<DVector<f64>> {
    let mut picked: Vec<DVector<f64>> = Vec::new();
    for p in points {
        let mut trial = picked.clone();
        trial.push(p.clone());
        if affine_rank(&trial, tol) == trial.len() - 1 {
            picked = trial;
            if picked.len() == count {
                break;
            }
        }
    }
    picked
}

/// Decide whether a ridge is an affine reflector (some affine map fixes the
/// ridge pointwise and maps one incident facet onto the other), and whether
/// the orthogonal reflection across the ridge's linear span realizes it.
pub fn find_affine_reflector(
    polytope: &Polytope,
    ridge_id: usize,
    match_tol: Option<f64>,
) -> Result<ReflectorReport> {
    let tol = match_tol.unwrap_or(10.0 * polytope.tol());
    let ridge = polytope.ridge(ridge_id);
    let [fa, fb] = ridge.facet_pair;
    let ridge_pts = vertex_set(polytope, &ridge.vertex_ids);
    let verts_a = vertex_set(polytope, &polytope.facet(fa).vertex_ids);
    let verts_b = vertex_set(polytope, &polytope.facet(fb).vertex_ids);

    // Euclidean test: only meaningful when the centroid sits at the origin,
    // so that the hyperplane through the ridge and the centroid is linear.
    let centroid = body_moments(polytope)?.mean;
    let mut is_euclidean = false;
    let mut euclidean_map = None;
    if centroid.norm() <= ISOTROPY_TOL {
        if let Ok(h) = hyperplane_normal(&ridge_pts, polytope.tol()) {
            let reflected: Vec<DVector<f64>> = verts_a.iter().map(|x| reflect(x, &h)).collect();
            if sets_match(&reflected, &verts_b, tol) {
                is_euclidean = true;
                let n = polytope.dim();
                euclidean_map = Some(AffineMap {
                    matrix: DMatrix::identity(n, n) - (&h * h.transpose()) * 2.0,
                    shift: DVector::zeros(n),
                });
            }
        }
    }

    // Affine search. A map fixing the ridge pointwise is determined on
    // aff(F_a) by the image of a single off-ridge vertex, so candidates are
    // just the off-ridge vertices of F_b.
    let off_a: Vec<usize> = polytope
        .facet(fa)
        .vertex_ids
        .iter()
        .filter(|i| !ridge.vertex_ids.contains(i))
        .cloned()
        .collect();
    let off_b: Vec<usize> = polytope
        .facet(fb)
        .vertex_ids
        .iter()
        .filter(|i| !ridge.vertex_ids.contains(i))
        .cloned()
        .collect();
    let mut report = ReflectorReport {
        ridge_id,
        is_affine: is_euclidean,
        is_euclidean,
        map: euclidean_map,
    };
    if off_a.len() != off_b.len() {
        return Ok(report);
    }
    if report.is_affine {
        return Ok(report);
    }

    let n = polytope.dim();
    let frame_ridge = affinely_independent_subset(&ridge_pts, n - 1, polytope.tol());
    if frame_ridge.len() != n - 1 {
        return Ok(report); // ridge vertex set degenerate; nothing to decide
    }
    let mut ridge_centroid = DVector::zeros(n);
    for p in &ridge_pts {
        ridge_centroid += p;
    }
    ridge_centroid /= ridge_pts.len() as f64;
    let anchor = &ridge_centroid + &polytope.facet(fa).normal;
    let anchor_target = &ridge_centroid + &polytope.facet(fb).normal;

    let u0 = polytope.vertex(off_a[0]).clone();
    let images: Vec<DVector<f64>> = vertex_set(polytope, &off_a);
    let targets = vertex_set(polytope, &off_b);
    for w in &targets {
        let mut sources = frame_ridge.clone();
        sources.push(u0.clone());
        sources.push(anchor.clone());
        let mut targets_pts = frame_ridge.clone();
        targets_pts.push(w.clone());
        targets_pts.push(anchor_target.clone());
        let Ok(map) = AffineMap::interpolating(&sources, &targets_pts) else {
            continue;
        };
        // The map must fix every ridge vertex and carry the off-ridge
        // vertices of F_a bijectively onto those of F_b.
        let fixes_ridge = ridge_pts
            .iter()
            .all(|p| (map.apply(p) - p).norm() <= tol);
        if !fixes_ridge {
            continue;
        }
        let mapped: Vec<DVector<f64>> = images.iter().map(|p| map.apply(p)).collect();
        if sets_match(&mapped, &targets, tol) {
            report.is_affine = true;
            report.map = Some(map);
            break;
        }
    }
    Ok(report)
}

/// Third-moment matrix `m_ij = E[X_i X_j X_n]` of a facet, computed after the
/// rigid repositioning that sends the linear span of the given ridge onto the
/// coordinate hyperplane `x_n = 0` with the facet on the side `x_n >= 0`.
pub fn third_moment_matrix(
    polytope: &Polytope,
    ridge_id: usize,
    facet_id: usize,
) -> Result<DMatrix<f64>> {
    let ridge = polytope.ridge(ridge_id);
    if !ridge.facet_pair.contains(&facet_id) {
        return Err(Error::FrameFailure(format!(
            "facet {facet_id} is not incident to ridge {ridge_id}"
        )));
    }
    let n = polytope.dim();
    let ridge_pts = vertex_set(polytope, &ridge.vertex_ids);
    let (span, comp) = span_basis(&ridge_pts, polytope.tol());
    if span.len() != n - 1 || comp.len() != 1 {
        return Err(Error::FrameFailure(
            "ridge points do not span a linear hyperplane".into(),
        ));
    }
    let mut h = comp.into_iter().next().unwrap();
    let facet = polytope.facet(facet_id);
    let mut facet_centroid = DVector::zeros(n);
    for &i in &facet.vertex_ids {
        facet_centroid += polytope.vertex(i);
    }
    facet_centroid /= facet.vertex_ids.len() as f64;
    let side = h.dot(&facet_centroid);
    if side.abs() <= polytope.tol() * (1.0 + facet_centroid.norm()) {
        return Err(Error::FrameFailure("facet lies inside the ridge span".into()));
    }
    if side < 0.0 {
        h = -h;
    }
    for &i in &facet.vertex_ids {
        if h.dot(polytope.vertex(i)) < -10.0 * polytope.tol() {
            return Err(Error::FrameFailure(
                "facet crosses the hyperplane spanned by the ridge".into(),
            ));
        }
    }
    // Rotation sending span basis -> e_1..e_{n-1} and h -> e_n.
    let mut rotation = DMatrix::zeros(n, n);
    for (r, b) in span.iter().enumerate() {
        for c in 0..n {
            rotation[(r, c)] = b[c];
        }
    }
    for c in 0..n {
        rotation[(n - 1, c)] = h[c];
    }
    let fm = facet_moments(polytope, facet_id)?;
    let rotated = fm.third.rotate(&rotation);
    Ok(DMatrix::from_fn(n, n, |i, j| rotated.get(i, j, n - 1)))
}

/// For every ridge through a simplicial vertex, report whether the union of
/// facets at the vertex is invariant under the reflection across the ridge's
/// linear span.
pub fn local_symmetry_check(
    polytope: &Polytope,
    vertex_id: usize,
) -> Result<Vec<(usize, bool)>> {
    ensure_isotropic(polytope)?;
    if !polytope.is_simplicial_vertex(vertex_id) {
        return Err(Error::NotSimplicialVertex(vertex_id));
    }
    let tol = 10.0 * polytope.tol();
    let star: Vec<usize> = (0..polytope.facets().len())
        .filter(|&f| polytope.facet(f).vertex_ids.contains(&vertex_id))
        .collect();
    let star_sets: Vec<Vec<DVector<f64>>> = star
        .iter()
        .map(|&f| vertex_set(polytope, &polytope.facet(f).vertex_ids))
        .collect();
    let mut out = Vec::new();
    for ridge_id in 0..polytope.ridges().len() {
        let ridge = polytope.ridge(ridge_id);
        if !ridge.vertex_ids.contains(&vertex_id) {
            continue;
        }
        let ridge_pts = vertex_set(polytope, &ridge.vertex_ids);
        let symmetric = match hyperplane_normal(&ridge_pts, polytope.tol()) {
            Err(_) => false,
            Ok(h) => star_sets.iter().all(|set| {
                let reflected: Vec<DVector<f64>> = set.iter().map(|x| reflect(x, &h)).collect();
                star_sets.iter().any(|other| sets_match(&reflected, other, tol))
            }),
        };
        out.push((ridge_id, symmetric));
    }
    Ok(out)
}
