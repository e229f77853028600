//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

use crate::error::Error;
use crate::Result;

/// An affine map `x -> A x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub matrix: DMatrix<f64>,
    pub shift: DVector<f64>,
}

impl AffineMap {
    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim),
            shift: DVector::zeros(dim),
        }
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.matrix * x + &self.shift
    }

    /// The unique affine map sending `sources[i]` to `targets[i]`.
    ///
    /// Needs `dim + 1` affinely independent source points.
    pub fn interpolating(sources: &[DVector<f64>], targets: &[DVector<f64>]) -> Result<Self> {
        let dim = sources[0].len();
        assert_eq!(sources.len(), dim + 1);
        assert_eq!(targets.len(), dim + 1);
        // Solve [A | b] * [x; 1] = y in homogeneous coordinates.
        let mut src = DMatrix::zeros(dim + 1, dim + 1);
        let mut tgt = DMatrix::zeros(dim, dim + 1);
        for (col, (s, t)) in sources.iter().zip(targets).enumerate() {
            for r in 0..dim {
                src[(r, col)] = s[r];
                tgt[(r, col)] = t[r];
            }
            src[(dim, col)] = 1.0;
        }
        let inv = src
            .try_inverse()
            .ok_or_else(|| Error::DegenerateInput("affinely dependent interpolation points".into()))?;
        let hom = tgt * inv;
        let matrix = hom.view((0, 0), (dim, dim)).into_owned();
        let shift = hom.column(dim).into_owned();
        Ok(Self { matrix, shift })
    }
}

/// Determinant of a small square matrix given as rows; cofactor expansion.
///
/// Faster than LU for the sizes that appear in hull enumeration (k <= 5) and
/// free of allocations beyond the recursion buffers.
pub fn small_det(rows: &[Vec<f64>]) -> f64 {
    let k = rows.len();
    match k {
        0 => 1.0,
        1 => rows[0][0],
        2 => rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0],
        3 => {
            rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
                - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
                + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0])
        }
        _ => {
            let mut acc = 0.0;
            let mut minor = vec![vec![0.0; k - 1]; k - 1];
            for col in 0..k {
                for r in 1..k {
                    let mut c = 0;
                    for cc in 0..k {
                        if cc == col {
                            continue;
                        }
                        minor[r - 1][c] = rows[r][cc];
                        c += 1;
                    }
                }
                let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * rows[0][col] * small_det(&minor);
            }
            acc
        }
    }
}

/// Vector orthogonal to `n - 1` difference vectors in `R^n` (generalized cross
/// product via cofactors). Zero vector when the inputs are dependent.
pub fn orthogonal_complement_vector(diffs: &[DVector<f64>]) -> DVector<f64> {
    let n = diffs[0].len();
    assert_eq!(diffs.len(), n - 1);
    let mut normal = DVector::zeros(n);
    let mut minor = vec![vec![0.0; n - 1]; n - 1];
    for j in 0..n {
        for (r, d) in diffs.iter().enumerate() {
            let mut c = 0;
            for cc in 0..n {
                if cc == j {
                    continue;
                }
                minor[r][c] = d[cc];
                c += 1;
            }
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        normal[j] = sign * small_det(&minor);
    }
    normal
}

/// Orthonormal basis of the linear span of `points`, split into the span part
/// and its orthogonal complement, via SVD right singular vectors.
///
/// Returns `(basis_of_span, basis_of_complement)`.
pub fn span_basis(points: &[DVector<f64>], tol: f64) -> (Vec<DVector<f64>>, Vec<DVector<f64>>) {
    let n = points[0].len();
    // Pad with zero rows so the thin SVD still returns a full n x n V^T.
    let rows = points.len().max(n);
    let mat = DMatrix::from_fn(rows, n, |r, c| if r < points.len() { points[r][c] } else { 0.0 });
    let svd = mat.svd(false, true);
    let v_t = svd.v_t.expect("svd requested v_t");
    let mut span = Vec::new();
    let mut comp = Vec::new();
    let max_sv = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    for i in 0..n {
        let sv = if i < svd.singular_values.len() {
            svd.singular_values[i]
        } else {
            0.0
        };
        let vec = v_t.row(i).transpose().into_owned();
        if sv > tol * (1.0 + max_sv) {
            span.push(vec);
        } else {
            comp.push(vec);
        }
    }
    (span, comp)
}

/// Unit normal of the linear hyperplane spanned by `points`, or an error if
/// their span is not `(n-1)`-dimensional.
pub fn hyperplane_normal(points: &[DVector<f64>], tol: f64) -> Result<DVector<f64>> {
    let n = points[0].len();
    let (span, comp) = span_basis(points, tol);
    if span.len() != n - 1 || comp.len() != 1 {
        return Err(Error::FrameFailure(format!(
            "points span a {}-dimensional space, expected {}",
            span.len(),
            n - 1
        )));
    }
    let mut normal = comp.into_iter().next().unwrap();
    // Deterministic sign: largest-magnitude component positive.
    let lead = (0..n).max_by(|&a, &b| normal[a].abs().total_cmp(&normal[b].abs())).unwrap();
    if normal[lead] < 0.0 {
        normal = -normal;
    }
    Ok(normal)
}

/// Householder-style reflection across the linear hyperplane with unit normal `h`.
pub fn reflect(x: &DVector<f64>, h: &DVector<f64>) -> DVector<f64> {
    x - h * (2.0 * h.dot(x))
}

/// Rank of the affine hull of `points` (dimension of their affine span).
pub fn affine_rank(points: &[DVector<f64>], tol: f64) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = &points[0];
    let diffs: Vec<DVector<f64>> = points[1..].iter().map(|p| p - base).collect();
    let scale = diffs.iter().map(|d| d.norm()).fold(0.0_f64, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let (span, _) = span_basis(&diffs, tol / (1.0 + scale));
    span.len()
}

/// Least-squares residual of fitting an affine function `x -> <a, x> + c`
/// through the samples `(points[i], values[i])`.
pub fn affine_fit_residual(points: &[DVector<f64>], values: &[f64]) -> f64 {
    let n = points[0].len();
    let m = points.len();
    let mat = DMatrix::from_fn(m, n + 1, |r, c| if c < n { points[r][c] } else { 1.0 });
    let rhs = DVector::from_column_slice(values);
    let svd = mat.clone().svd(true, true);
    let coef = svd.solve(&rhs, 1e-13).expect("svd solve");
    (mat * coef - rhs).norm()
}
