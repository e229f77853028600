//! Helpers shared by the integration suites: seeded random bodies and maps.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polyiso::geom::{shapes, Polytope};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn hexagon() -> Polytope {
    polyiso::zonotopes::q_n(2).to_polytope().unwrap()
}

/// Hull of `count` uniform points in the unit box; redrawn if degenerate.
pub fn random_body(rng: &mut ChaCha8Rng, dim: usize, count: usize) -> Polytope {
    loop {
        let pts: Vec<DVector<f64>> = (0..count)
            .map(|_| DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0)))
            .collect();
        if let Ok(p) = Polytope::from_points(&pts, dim) {
            return p;
        }
    }
}

/// Well-conditioned random affine map: entries in the unit box, redrawn until
/// the determinant is macroscopic.
pub fn random_affine(rng: &mut ChaCha8Rng, dim: usize) -> (DMatrix<f64>, DVector<f64>) {
    let matrix = loop {
        let m: DMatrix<f64> = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0));
        if m.determinant().abs() >= 0.2 {
            break m;
        }
    };
    let shift = DVector::from_fn(dim, |_, _| rng.gen_range(-2.0..2.0));
    (matrix, shift)
}

/// Random rotation/reflection from the QR factorization of a Gaussian-ish
/// matrix.
pub fn random_orthogonal(rng: &mut ChaCha8Rng, dim: usize) -> DMatrix<f64> {
    loop {
        let m: DMatrix<f64> = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0));
        if m.determinant().abs() < 0.05 {
            continue;
        }
        let qr = m.qr();
        return qr.q();
    }
}

pub fn apply_affine(p: &Polytope, matrix: &DMatrix<f64>, shift: &DVector<f64>) -> Polytope {
    let pts: Vec<DVector<f64>> = p.vertices().iter().map(|v| matrix * v + shift).collect();
    Polytope::from_points(&pts, p.dim()).unwrap()
}

pub fn perturbed_octahedron(seed: u64, amplitude: f64) -> Polytope {
    let mut r = rng(seed);
    let pts: Vec<DVector<f64>> = shapes::cross_polytope(3)
        .vertices()
        .iter()
        .map(|p| p.map(|x| x + amplitude * r.gen_range(-1.0..1.0)))
        .collect();
    Polytope::from_points(&pts, 3).unwrap()
}
