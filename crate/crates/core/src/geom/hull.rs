//! Brute-force convex hull: enumerate supporting hyperplanes over all
//! `n`-subsets of the input, merge coplanar supports, filter extreme points.

use std::collections::BTreeMap;

use itertools::Itertools;
use nalgebra::DVector;

use crate::error::Error;
use crate::linalg::{affine_rank, orthogonal_complement_vector, span_basis};
use crate::Result;

use super::{Facet, Polytope, Ridge};

pub(super) fn build(points: &[DVector<f64>], dim: usize) -> Result<Polytope> {
    if !(2..=6).contains(&dim) {
        return Err(Error::DegenerateInput(format!(
            "dimension {dim} outside supported range 2..=6"
        )));
    }
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::DegenerateInput("point length does not match dimension".into()));
    }
    if points.iter().flat_map(|p| p.iter()).any(|x| !x.is_finite()) {
        return Err(Error::DegenerateInput("non-finite coordinate".into()));
    }

    let scale = points
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0_f64, |m, &x| m.max(x.abs()));
    let tol = 1e-9 * (1.0 + scale);

    // Drop duplicates, keeping input order.
    let mut pts: Vec<DVector<f64>> = Vec::new();
    for p in points {
        if !pts.iter().any(|q| (q - p).norm() <= tol) {
            pts.push(p.clone());
        }
    }
    if pts.len() < dim + 1 {
        return Err(Error::DegenerateInput(format!(
            "need at least {} distinct points, got {}",
            dim + 1,
            pts.len()
        )));
    }
    if affine_rank(&pts, tol) < dim {
        return Err(Error::DegenerateInput(
            "points do not affinely span the ambient space".into(),
        ));
    }

    let mut interior = DVector::zeros(dim);
    for p in &pts {
        interior += p;
    }
    interior /= pts.len() as f64;

    // Pass 1: candidate supports keyed by their on-set.
    let mut candidates: BTreeMap<Vec<usize>, (DVector<f64>, f64)> = BTreeMap::new();
    for subset in (0..pts.len()).combinations(dim) {
        let base = &pts[subset[0]];
        let diffs: Vec<DVector<f64>> =
            subset[1..].iter().map(|&i| &pts[i] - base).collect();
        let normal = orthogonal_complement_vector(&diffs);
        let len = normal.norm();
        if len <= 1e-12 * diffs.iter().map(|d| 1.0 + d.norm()).product::<f64>() {
            continue; // affinely dependent subset
        }
        let mut u = normal / len;
        let mut b = u.dot(base);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in &pts {
            let side = u.dot(p) - b;
            lo = lo.min(side);
            hi = hi.max(side);
        }
        if hi > tol && lo < -tol {
            continue; // not supporting
        }
        if hi <= tol && lo < -tol {
            // outward already
        } else if lo >= -tol && hi > tol {
            u = -u;
            b = -b;
        } else {
            continue; // all points on the hyperplane: not full-dimensional here
        }
        let on: Vec<usize> = (0..pts.len())
            .filter(|&i| (u.dot(&pts[i]) - b).abs() <= tol)
            .collect();
        candidates.entry(on).or_insert((u, b));
    }

    // Pass 2: refit each support from its full on-set and re-key; this merges
    // coplanar supports found through different subsets.
    let mut supports: BTreeMap<Vec<usize>, (DVector<f64>, f64)> = BTreeMap::new();
    for on in candidates.into_keys() {
        let members: Vec<DVector<f64>> = on.iter().map(|&i| pts[i].clone()).collect();
        let mut origin = DVector::zeros(dim);
        for m in &members {
            origin += m;
        }
        origin /= members.len() as f64;
        let diffs: Vec<DVector<f64>> = members.iter().map(|m| m - &origin).collect();
        let (span, comp) = span_basis(&diffs, tol);
        if span.len() != dim - 1 || comp.len() != 1 {
            continue; // support touches a lower-dimensional face only
        }
        let mut u = comp.into_iter().next().unwrap();
        let mut b = u.dot(&origin);
        if u.dot(&interior) > b {
            u = -u;
            b = -b;
        }
        let refit_on: Vec<usize> = (0..pts.len())
            .filter(|&i| (u.dot(&pts[i]) - b).abs() <= tol)
            .collect();
        supports.insert(refit_on, (u, b));
    }

    // Extreme points: active facet normals must span R^n.
    let mut active: Vec<Vec<DVector<f64>>> = vec![Vec::new(); pts.len()];
    for (on, (u, _)) in &supports {
        for &i in on {
            active[i].push(u.clone());
        }
    }
    let mut keep = Vec::new();
    for (i, normals) in active.iter().enumerate() {
        if normals.len() < dim {
            continue;
        }
        let (span, _) = span_basis(normals, 1e-6);
        if span.len() == dim {
            keep.push(i);
        }
    }
    if keep.len() < dim + 1 {
        return Err(Error::DegenerateInput("hull collapsed; input too degenerate".into()));
    }
    let mut new_id = vec![usize::MAX; pts.len()];
    for (ni, &oi) in keep.iter().enumerate() {
        new_id[oi] = ni;
    }
    let vertices: Vec<DVector<f64>> = keep.iter().map(|&i| pts[i].clone()).collect();

    let mut facets: Vec<Facet> = Vec::new();
    for (on, (normal, offset)) in supports {
        let vertex_ids: Vec<usize> = on
            .iter()
            .filter(|&&i| new_id[i] != usize::MAX)
            .map(|&i| new_id[i])
            .collect();
        if vertex_ids.len() < dim {
            return Err(Error::DegenerateInput(
                "facet with too few extreme vertices; input too degenerate".into(),
            ));
        }
        facets.push(Facet {
            vertex_ids,
            normal,
            offset,
        });
    }

    // Ridges: facet pairs whose shared vertices have affine rank n - 2.
    let mut ridges: Vec<Ridge> = Vec::new();
    for a in 0..facets.len() {
        for b in (a + 1)..facets.len() {
            let shared: Vec<usize> = facets[a]
                .vertex_ids
                .iter()
                .filter(|i| facets[b].vertex_ids.contains(i))
                .cloned()
                .collect();
            if shared.len() < dim - 1 {
                continue;
            }
            let shared_pts: Vec<DVector<f64>> =
                shared.iter().map(|&i| vertices[i].clone()).collect();
            if affine_rank(&shared_pts, tol) == dim - 2 {
                ridges.push(Ridge {
                    vertex_ids: shared,
                    facet_pair: [a, b],
                });
            }
        }
    }
    // Sanity: every ridge vertex set is contained in exactly its two facets.
    for ridge in &ridges {
        let count = facets
            .iter()
            .filter(|f| ridge.vertex_ids.iter().all(|i| f.vertex_ids.contains(i)))
            .count();
        if count != 2 {
            return Err(Error::DegenerateInput(format!(
                "ridge contained in {count} facets; expected 2"
            )));
        }
    }

    Ok(Polytope::from_parts(dim, vertices, facets, ridges, tol))
}
