//! Constructors for the reference bodies used throughout the crate.

use nalgebra::DVector;

use crate::Result;

use super::Polytope;

/// The cube `[-1, 1]^n`.
pub fn cube(n: usize) -> Polytope {
    let pts: Vec<DVector<f64>> = (0..1usize << n)
        .map(|mask| {
            DVector::from_iterator(
                n,
                (0..n).map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 }),
            )
        })
        .collect();
    Polytope::from_points(&pts, n).expect("cube is non-degenerate")
}

/// The cross-polytope `conv{ +-e_1, .., +-e_n }`.
pub fn cross_polytope(n: usize) -> Polytope {
    let mut pts = Vec::with_capacity(2 * n);
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut v = DVector::zeros(n);
            v[i] = s;
            pts.push(v);
        }
    }
    Polytope::from_points(&pts, n).expect("cross-polytope is non-degenerate")
}

/// The simplex `conv{ 0, e_1, .., e_n }`.
pub fn standard_simplex(n: usize) -> Polytope {
    let mut pts = vec![DVector::zeros(n)];
    for i in 0..n {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        pts.push(v);
    }
    Polytope::from_points(&pts, n).expect("simplex is non-degenerate")
}

/// Pyramid in `R^n`: the convex hull of a base polytope embedded at height 0
/// and an apex point.
pub fn pyramid(base: &Polytope, apex: &DVector<f64>) -> Result<Polytope> {
    let n = base.dim() + 1;
    assert_eq!(apex.len(), n);
    let mut pts: Vec<DVector<f64>> = base
        .vertices()
        .iter()
        .map(|v| {
            let mut w = DVector::zeros(n);
            for i in 0..base.dim() {
                w[i] = v[i];
            }
            w
        })
        .collect();
    pts.push(apex.clone());
    Polytope::from_points(&pts, n)
}

/// Prism `base x [-h, h]` in one dimension higher.
pub fn prism(base: &Polytope, half_height: f64) -> Result<Polytope> {
    let n = base.dim() + 1;
    let mut pts = Vec::with_capacity(2 * base.vertices().len());
    for v in base.vertices() {
        for s in [-1.0, 1.0] {
            let mut w = DVector::zeros(n);
            for i in 0..base.dim() {
                w[i] = v[i];
            }
            w[n - 1] = s * half_height;
            pts.push(w);
        }
    }
    Polytope::from_points(&pts, n)
}
