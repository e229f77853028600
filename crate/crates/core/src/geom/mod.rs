//! Canonical polytope representation: vertices, facet/ridge lattice,
//! triangulation and combinatorial predicates.
//!
//! A [`Polytope`] is always full-dimensional, stores extreme points only and
//! carries a complete facet and ridge lattice recomputed from the vertex set.

mod hull;
pub mod shapes;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::{affine_rank, span_basis};
use crate::Result;

/// A facet: the vertices on its supporting hyperplane `<u, x> = b`,
/// with `u` the unit outward normal.
#[derive(Debug, Clone)]
pub struct Facet {
    pub vertex_ids: Vec<usize>,
    pub normal: DVector<f64>,
    pub offset: f64,
}

/// An `(n-2)`-dimensional face, shared by exactly two facets.
#[derive(Debug, Clone)]
pub struct Ridge {
    pub vertex_ids: Vec<usize>,
    pub facet_pair: [usize; 2],
}

/// A `k`-simplex given by `k + 1` affinely independent points (possibly
/// embedded in a higher-dimensional ambient space).
#[derive(Debug, Clone)]
pub struct Simplex {
    vertices: Vec<DVector<f64>>,
}

impl Simplex {
    pub fn new(vertices: Vec<DVector<f64>>) -> Self {
        assert!(!vertices.is_empty());
        Self { vertices }
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }

    /// Intrinsic dimension `k`.
    pub fn k(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].len()
    }

    /// `k`-dimensional volume via the Gram determinant,
    /// `sqrt(det(D^T D)) / k!` for the edge matrix `D`.
    pub fn measure(&self) -> f64 {
        let k = self.k();
        if k == 0 {
            return 1.0;
        }
        let base = &self.vertices[0];
        let diffs: Vec<DVector<f64>> = self.vertices[1..].iter().map(|v| v - base).collect();
        let mut gram = vec![vec![0.0; k]; k];
        for i in 0..k {
            for j in 0..k {
                gram[i][j] = diffs[i].dot(&diffs[j]);
            }
        }
        let det = crate::linalg::small_det(&gram);
        let factorial: f64 = (1..=k).map(|i| i as f64).product();
        det.max(0.0).sqrt() / factorial
    }
}

/// Orthonormal chart of the affine hull of a facet. Maps between ambient
/// coordinates and `(n-1)`-dimensional chart coordinates.
#[derive(Debug, Clone)]
pub struct FacetChart {
    pub origin: DVector<f64>,
    pub basis: Vec<DVector<f64>>,
}

impl FacetChart {
    pub fn project(&self, x: &DVector<f64>) -> DVector<f64> {
        let rel = x - &self.origin;
        DVector::from_iterator(self.basis.len(), self.basis.iter().map(|b| b.dot(&rel)))
    }

    pub fn lift(&self, c: &DVector<f64>) -> DVector<f64> {
        let mut x = self.origin.clone();
        for (i, b) in self.basis.iter().enumerate() {
            x += b * c[i];
        }
        x
    }
}

/// A full-dimensional convex polytope in `R^n` with its facet/ridge lattice.
#[derive(Debug, Clone)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<DVector<f64>>,
    facets: Vec<Facet>,
    ridges: Vec<Ridge>,
    tol: f64,
}

impl Polytope {
    /// Convex hull of `points` in `R^dim`.
    ///
    /// Brute-force hyperplane enumeration over `dim`-subsets; adequate and
    /// robust for the desk scale this crate targets (`2 <= dim <= 6`, at most
    /// a few hundred points). Non-extreme input points are dropped.
    pub fn from_points(points: &[DVector<f64>], dim: usize) -> Result<Self> {
        hull::build(points, dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }

    pub fn vertex(&self, id: usize) -> &DVector<f64> {
        &self.vertices[id]
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn facet(&self, id: usize) -> &Facet {
        &self.facets[id]
    }

    pub fn ridges(&self) -> &[Ridge] {
        &self.ridges
    }

    pub fn ridge(&self, id: usize) -> &Ridge {
        &self.ridges[id]
    }

    /// Geometric tolerance used when this polytope was built:
    /// `1e-9 * (1 + max coordinate magnitude)`.
    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn contains(&self, x: &DVector<f64>) -> bool {
        self.facets
            .iter()
            .all(|f| f.normal.dot(x) <= f.offset + self.tol)
    }

    /// Signed distance to the boundary from inside: positive strictly inside,
    /// about zero on the boundary, negative outside.
    pub fn boundary_clearance(&self, x: &DVector<f64>) -> f64 {
        self.facets
            .iter()
            .map(|f| f.offset - f.normal.dot(x))
            .fold(f64::INFINITY, f64::min)
    }

    /// Two facets are adjacent when their common vertices form a ridge.
    pub fn adjacency(&self, facet_a: usize, facet_b: usize) -> bool {
        assert!(facet_a < self.facets.len() && facet_b < self.facets.len());
        let key = if facet_a < facet_b {
            [facet_a, facet_b]
        } else {
            [facet_b, facet_a]
        };
        self.ridges.iter().any(|r| r.facet_pair == key)
    }

    /// A vertex is simplicial when every incident facet is a simplex.
    pub fn is_simplicial_vertex(&self, vertex_id: usize) -> bool {
        assert!(vertex_id < self.vertices.len());
        self.facets
            .iter()
            .filter(|f| f.vertex_ids.contains(&vertex_id))
            .all(|f| {
                f.vertex_ids.len() == self.dim && {
                    let pts: Vec<DVector<f64>> =
                        f.vertex_ids.iter().map(|&i| self.vertices[i].clone()).collect();
                    affine_rank(&pts, self.tol) == self.dim - 1
                }
            })
    }

    /// Center of symmetry if the vertex set is invariant under `x -> 2c - x`,
    /// with `c` the vertex centroid.
    pub fn symmetry_center(&self) -> Option<DVector<f64>> {
        let n = self.vertices.len() as f64;
        let mut c = DVector::zeros(self.dim);
        for v in &self.vertices {
            c += v;
        }
        c /= n;
        for v in &self.vertices {
            let mirrored = &c * 2.0 - v;
            if !self
                .vertices
                .iter()
                .any(|w| (w - &mirrored).norm() <= self.tol * 10.0)
            {
                return None;
            }
        }
        Some(c)
    }

    /// Index of the vertex paired with `vertex_id` under the central symmetry
    /// at `center`.
    pub fn mirror_vertex(&self, vertex_id: usize, center: &DVector<f64>) -> Option<usize> {
        let mirrored = center * 2.0 - &self.vertices[vertex_id];
        self.vertices
            .iter()
            .position(|w| (w - &mirrored).norm() <= self.tol * 10.0)
    }

    /// Orthonormal chart of a facet's affine hull, centered at the facet's
    /// vertex centroid.
    pub fn facet_chart(&self, facet_id: usize) -> FacetChart {
        let facet = &self.facets[facet_id];
        let mut origin = DVector::zeros(self.dim);
        for &i in &facet.vertex_ids {
            origin += &self.vertices[i];
        }
        origin /= facet.vertex_ids.len() as f64;
        let diffs: Vec<DVector<f64>> = facet
            .vertex_ids
            .iter()
            .map(|&i| &self.vertices[i] - &origin)
            .collect();
        let (basis, _) = span_basis(&diffs, self.tol);
        debug_assert_eq!(basis.len(), self.dim - 1);
        FacetChart { origin, basis }
    }

    /// Simplex spanned by the given vertex ids.
    pub fn simplex(&self, ids: &[usize]) -> Simplex {
        Simplex::new(ids.iter().map(|&i| self.vertices[i].clone()).collect())
    }

    /// Partition of a facet into `(n-1)`-simplices, each returned as `n`
    /// vertex ids. Recursive hull-and-fan in an orthonormal chart; no new
    /// points are introduced.
    pub fn triangulate_facet(&self, facet_id: usize) -> Vec<Vec<usize>> {
        let chart = self.facet_chart(facet_id);
        let facet = &self.facets[facet_id];
        let pts: Vec<DVector<f64>> = facet
            .vertex_ids
            .iter()
            .map(|&i| chart.project(&self.vertices[i]))
            .collect();
        triangulate_chart(&pts, &facet.vertex_ids, self.tol)
    }

    /// Partition of the body into `n`-simplices (fan from vertex 0 over all
    /// facets avoiding it), each returned as `n + 1` vertex ids.
    pub fn triangulate_body(&self) -> Vec<Vec<usize>> {
        let apex = 0usize;
        let mut out = Vec::new();
        for (fid, facet) in self.facets.iter().enumerate() {
            if facet.vertex_ids.contains(&apex) {
                continue;
            }
            for simplex in self.triangulate_facet(fid) {
                let mut ids = Vec::with_capacity(self.dim + 1);
                ids.push(apex);
                ids.extend(simplex);
                out.push(ids);
            }
        }
        out
    }

    pub fn to_def(&self) -> PolytopeDef {
        PolytopeDef {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| v.as_slice().to_vec()).collect(),
        }
    }

    pub(crate) fn from_parts(
        dim: usize,
        vertices: Vec<DVector<f64>>,
        facets: Vec<Facet>,
        ridges: Vec<Ridge>,
        tol: f64,
    ) -> Self {
        Self {
            dim,
            vertices,
            facets,
            ridges,
            tol,
        }
    }
}

/// Recursively triangulate the vertex set of a `k`-dimensional polytope given
/// in chart coordinates; `ids` are the caller's labels carried through.
fn triangulate_chart(points: &[DVector<f64>], ids: &[usize], tol: f64) -> Vec<Vec<usize>> {
    let k = points[0].len();
    if k == 1 {
        let lo = (0..points.len())
            .min_by(|&a, &b| points[a][0].total_cmp(&points[b][0]))
            .unwrap();
        let hi = (0..points.len())
            .max_by(|&a, &b| points[a][0].total_cmp(&points[b][0]))
            .unwrap();
        return vec![vec![ids[lo], ids[hi]]];
    }
    let sub = hull::build(points, k).expect("face vertex set must be full-dimensional in its chart");
    // Points entering here are extreme points of a face, so none should drop.
    debug_assert_eq!(sub.vertices.len(), points.len(), "face chart dropped a vertex");
    let back: Vec<usize> = sub
        .vertices
        .iter()
        .map(|v| {
            (0..points.len())
                .min_by(|&a, &b| {
                    (&points[a] - v).norm().total_cmp(&(&points[b] - v).norm())
                })
                .unwrap()
        })
        .collect();
    let apex_sub = 0usize;
    let mut out = Vec::new();
    for (fid, facet) in sub.facets.iter().enumerate() {
        if facet.vertex_ids.contains(&apex_sub) {
            continue;
        }
        for simplex in sub.triangulate_facet(fid) {
            let mut tri = Vec::with_capacity(k + 1);
            tri.push(ids[back[apex_sub]]);
            tri.extend(simplex.iter().map(|&j| ids[back[j]]));
            out.push(tri);
        }
    }
    let _ = tol;
    out
}

/// Serialization schema for polytopes: `{"dim": n, "vertices": [[..], ..]}`.
///
/// The facet lattice is never read from input; `build` recomputes it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolytopeDef {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
}

impl PolytopeDef {
    pub fn build(&self) -> Result<Polytope> {
        if self.vertices.iter().any(|v| v.len() != self.dim) {
            return Err(Error::DegenerateInput(format!(
                "vertex length does not match dim={}",
                self.dim
            )));
        }
        let pts: Vec<DVector<f64>> = self
            .vertices
            .iter()
            .map(|v| DVector::from_column_slice(v))
            .collect();
        Polytope::from_points(&pts, self.dim)
    }
}
