//! Exact moments of the uniform distribution on polytope bodies and facets,
//! up to third order.
//!
//! Everything reduces to barycentric Dirichlet moments on simplices: for
//! `X = sum_a lambda_a v_a` with flat Dirichlet weights on `k + 1` vertices,
//! `E[prod lambda_a^{m_a}] = k! * prod m_a! / (k + sum m_a)!`. No quadrature.

use nalgebra::{DMatrix, DVector};

use crate::error::Error;
use crate::geom::{Polytope, Simplex};
use crate::Result;

/// Volume and centered second-order data of a body.
#[derive(Debug, Clone)]
pub struct BodyMoments {
    pub volume: f64,
    pub mean: DVector<f64>,
    /// Raw second moment `E[X X^T]`.
    pub second: DMatrix<f64>,
    /// Covariance `E[X X^T] - E[X] E[X]^T`.
    pub covariance: DMatrix<f64>,
}

/// Surface-measure moments of a facet, up to third order.
#[derive(Debug, Clone)]
pub struct FacetMoments {
    /// `(n-1)`-dimensional measure of the facet.
    pub area: f64,
    pub mean: DVector<f64>,
    pub second: DMatrix<f64>,
    /// `E[|X|^2 X]`, computed through the Gram-matrix route (an independent
    /// code path from the full third tensor).
    pub cubic_radial: DVector<f64>,
    /// Full symmetric tensor `E[X_i X_j X_k]`.
    pub third: ThirdMoments,
}

/// Dense symmetric rank-3 tensor of third moments.
#[derive(Debug, Clone)]
pub struct ThirdMoments {
    n: usize,
    data: Vec<f64>,
}

impl ThirdMoments {
    fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.n + j) * self.n + k]
    }

    #[inline]
    fn add(&mut self, i: usize, j: usize, k: usize, value: f64) {
        self.data[(i * self.n + j) * self.n + k] += value;
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Trace contraction `sum_j T[i][j][j]`.
    pub fn trace_contraction(&self) -> DVector<f64> {
        DVector::from_iterator(
            self.n,
            (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j, j)).sum()),
        )
    }

    /// Conjugate the tensor by a linear map: `T'_{abc} = sum R_ai R_bj R_ck T_ijk`.
    pub fn rotate(&self, r: &DMatrix<f64>) -> ThirdMoments {
        let n = self.n;
        let mut out = ThirdMoments::zeros(n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut acc = 0.0;
                    for i in 0..n {
                        for j in 0..n {
                            for k in 0..n {
                                acc += r[(a, i)] * r[(b, j)] * r[(c, k)] * self.get(i, j, k);
                            }
                        }
                    }
                    out.add(a, b, c, acc);
                }
            }
        }
        out
    }
}

fn check_nondegenerate(simplex: &Simplex) -> Result<f64> {
    let k = simplex.k();
    let scale = simplex
        .vertices()
        .iter()
        .skip(1)
        .map(|v| (v - &simplex.vertices()[0]).norm())
        .fold(0.0_f64, f64::max);
    let measure = simplex.measure();
    if k >= 1 && measure <= 1e-12 * (1.0 + scale).powi(k as i32) {
        return Err(Error::DegenerateSimplex(k));
    }
    Ok(measure)
}

/// Average of the monomial `prod_i X_i^{alpha_i}` over the uniform
/// distribution on a simplex, `|alpha| <= 3`.
pub fn simplex_monomial_moment(simplex: &Simplex, alpha: &[usize]) -> Result<f64> {
    assert_eq!(alpha.len(), simplex.ambient_dim());
    let order: usize = alpha.iter().sum();
    assert!(order <= 3, "only moments up to order 3 are supported");
    check_nondegenerate(simplex)?;
    if order == 0 {
        return Ok(1.0);
    }
    // Expand the monomial into coordinate slots and sum over all assignments
    // of slots to simplex vertices.
    let slots: Vec<usize> = alpha
        .iter()
        .enumerate()
        .flat_map(|(i, &m)| std::iter::repeat(i).take(m))
        .collect();
    let verts = simplex.vertices();
    let m = verts.len();
    let mut total = 0.0;
    let mut assignment = vec![0usize; slots.len()];
    loop {
        let weight = dirichlet_weight(simplex.k(), &assignment);
        let mut term = weight;
        for (s, &coord) in slots.iter().enumerate() {
            term *= verts[assignment[s]][coord];
        }
        total += term;
        // Next assignment in mixed radix.
        let mut pos = 0;
        loop {
            if pos == assignment.len() {
                return Ok(total);
            }
            assignment[pos] += 1;
            if assignment[pos] < m {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

/// `E[prod_s lambda_{a_s}]` for flat Dirichlet weights on `k + 1` vertices.
fn dirichlet_weight(k: usize, assignment: &[usize]) -> f64 {
    let r = assignment.len();
    let mut numer = 1.0;
    // prod m_a! over the multiplicity pattern of the assignment.
    for (idx, &a) in assignment.iter().enumerate() {
        let mult = assignment[..idx].iter().filter(|&&b| b == a).count();
        numer *= (mult + 1) as f64;
    }
    let mut denom = 1.0;
    for step in 1..=r {
        denom *= (k + step) as f64;
    }
    numer / denom
}

/// Exact volume, mean and covariance of the uniform distribution on a body.
pub fn body_moments(polytope: &Polytope) -> Result<BodyMoments> {
    let n = polytope.dim();
    let mut volume = 0.0;
    let mut first = DVector::zeros(n);
    let mut second = DMatrix::zeros(n, n);
    for ids in polytope.triangulate_body() {
        let simplex = polytope.simplex(&ids);
        let w = simplex.measure();
        if w <= 0.0 {
            continue;
        }
        let k = simplex.k();
        let mut s = DVector::zeros(n);
        let mut sq = DMatrix::zeros(n, n);
        for v in simplex.vertices() {
            s += v;
            sq += v * v.transpose();
        }
        volume += w;
        first += (&s / (k + 1) as f64) * w;
        second += (sq + &s * s.transpose()) * (w / ((k + 1) * (k + 2)) as f64);
    }
    if volume <= 0.0 {
        return Err(Error::DegenerateInput("zero-volume polytope".into()));
    }
    let mean = first / volume;
    let second = second / volume;
    let covariance = &second - &mean * mean.transpose();
    Ok(BodyMoments {
        volume,
        mean,
        second,
        covariance,
    })
}

/// Exact surface-measure moments of a facet, up to third order.
pub fn facet_moments(polytope: &Polytope, facet_id: usize) -> Result<FacetMoments> {
    let n = polytope.dim();
    let mut area = 0.0;
    let mut first = DVector::zeros(n);
    let mut second = DMatrix::zeros(n, n);
    let mut cubic = DVector::zeros(n);
    let mut third = ThirdMoments::zeros(n);
    for ids in polytope.triangulate_facet(facet_id) {
        let simplex = polytope.simplex(&ids);
        let w = simplex.measure();
        if w <= 0.0 {
            continue;
        }
        let verts = simplex.vertices();
        let k = simplex.k();
        let m = verts.len();
        let c2 = 1.0 / ((k + 1) * (k + 2)) as f64;
        let c3 = 1.0 / ((k + 1) * (k + 2) * (k + 3)) as f64;

        let mut s = DVector::zeros(n);
        let mut u = DMatrix::zeros(n, n); // sum_a v_a v_a^T
        for v in verts {
            s += v;
            u += v * v.transpose();
        }
        area += w;
        first += (&s / m as f64) * w;
        second += (&u + &s * s.transpose()) * (w * c2);

        // Full third tensor: c3 * (s (x) s (x) s + three U/s pairings + 2 W).
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let mut t = s[i] * s[j] * s[l]
                        + u[(i, j)] * s[l]
                        + u[(i, l)] * s[j]
                        + s[i] * u[(j, l)];
                    let mut w3 = 0.0;
                    for v in verts {
                        w3 += v[i] * v[j] * v[l];
                    }
                    t += 2.0 * w3;
                    third.add(i, j, l, w * c3 * t);
                }
            }
        }

        // E[|X|^2 X] through the vertex Gram matrix; an independent route.
        let mut gram = vec![vec![0.0; m]; m];
        for a in 0..m {
            for b in 0..m {
                gram[a][b] = verts[a].dot(&verts[b]);
            }
        }
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let mult = 1.0
                        + f64::from(a == b)
                        + f64::from(a == c)
                        + f64::from(b == c)
                        + 2.0 * f64::from(a == b && b == c);
                    let coeff = w * c3 * mult * gram[b][c];
                    for i in 0..n {
                        cubic[i] += coeff * verts[a][i];
                    }
                }
            }
        }
    }
    if area <= 0.0 {
        return Err(Error::DegenerateInput("zero-area facet".into()));
    }
    let inv = 1.0 / area;
    for entry in third.data.iter_mut() {
        *entry *= inv;
    }
    Ok(FacetMoments {
        area,
        mean: first * inv,
        second: second * inv,
        cubic_radial: cubic * inv,
        third,
    })
}
