//! Zonotope algebra: generators to V-representation, zones and cubical-zone
//! detection, the canonical form of an `(n+1)`-generator zonotope, and the
//! extremal search over `C_n + [-y, y]` for `y` in the unit box.


use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geom::Polytope;
use crate::isotropy::isotropic_constant;
use crate::linalg::AffineMap;
use crate::Result;

/// A zonotope `c + sum_i [-z_i, z_i]` with irredundant generators: zero
/// generators are dropped and parallel ones merged on construction.
#[derive(Debug, Clone)]
pub struct Zonotope {
    dim: usize,
    center: DVector<f64>,
    generators: Vec<DVector<f64>>,
}

/// Faces having a fixed generator as a Minkowski summand, recorded at the
/// facet level of the V-representation.
#[derive(Debug, Clone)]
pub struct Zone {
    pub generator_id: usize,
    pub facet_ids: Vec<usize>,
}

impl Zonotope {
    pub fn new(center: DVector<f64>, generators: Vec<DVector<f64>>) -> Result<Self> {
        let dim = center.len();
        let mut merged: Vec<DVector<f64>> = Vec::new();
        for g in generators {
            assert_eq!(g.len(), dim);
            let len = g.norm();
            if len <= 1e-12 {
                continue;
            }
            let mut absorbed = false;
            for existing in merged.iter_mut() {
                let elen = existing.norm();
                let residual = (&g - &*existing * (existing.dot(&g) / (elen * elen))).norm();
                if residual <= 1e-9 * len {
                    // Parallel segments add up along the shared direction.
                    *existing *= (elen + len) / elen;
                    absorbed = true;
                    break;
                }
            }
            if !absorbed {
                merged.push(g);
            }
        }
        let mat = DMatrix::from_fn(dim, merged.len().max(1), |r, c| {
            if c < merged.len() {
                merged[c][r]
            } else {
                0.0
            }
        });
        if mat.rank(1e-9) < dim {
            return Err(Error::SpanDeficient(dim));
        }
        Ok(Self {
            dim,
            center,
            generators: merged,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn center(&self) -> &DVector<f64> {
        &self.center
    }

    pub fn generators(&self) -> &[DVector<f64>] {
        &self.generators
    }

    /// V-representation: hull of the `2^m` sign combinations of the
    /// generators around the center.
    pub fn to_polytope(&self) -> Result<Polytope> {
        let m = self.generators.len();
        if m > 20 {
            return Err(Error::DegenerateInput(format!(
                "{m} generators exceed the 2^m enumeration budget"
            )));
        }
        let pts: Vec<DVector<f64>> = (0..1usize << m)
            .map(|mask| {
                let mut p = self.center.clone();
                for (k, g) in self.generators.iter().enumerate() {
                    p += g * if mask >> k & 1 == 1 { 1.0 } else { -1.0 };
                }
                p
            })
            .collect();
        Polytope::from_points(&pts, self.dim)
    }

    pub fn to_def(&self) -> ZonotopeDef {
        ZonotopeDef {
            dim: self.dim,
            center: self.center.as_slice().to_vec(),
            generators: self.generators.iter().map(|g| g.as_slice().to_vec()).collect(),
        }
    }
}

/// Serialization schema: `{"dim": n, "center": [..], "generators": [[..], ..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZonotopeDef {
    pub dim: usize,
    pub center: Vec<f64>,
    pub generators: Vec<Vec<f64>>,
}

impl ZonotopeDef {
    pub fn build(&self) -> Result<Zonotope> {
        if self.center.len() != self.dim || self.generators.iter().any(|g| g.len() != self.dim) {
            return Err(Error::DegenerateInput("vector length does not match dim".into()));
        }
        Zonotope::new(
            DVector::from_column_slice(&self.center),
            self.generators
                .iter()
                .map(|g| DVector::from_column_slice(g))
                .collect(),
        )
    }
}

/// `Q_n = C_n + [-(e_1 + .. + e_n), e_1 + .. + e_n]`: hexagon at n = 2,
/// affinely a rhombic dodecahedron at n = 3.
pub fn q_n(n: usize) -> Zonotope {
    let mut gens: Vec<DVector<f64>> = (0..n)
        .map(|i| {
            let mut e = DVector::zeros(n);
            e[i] = 1.0;
            e
        })
        .collect();
    gens.push(DVector::from_element(n, 1.0));
    Zonotope::new(DVector::zeros(n), gens).expect("q_n generators span")
}

/// Zone membership of every facet of the V-representation.
///
/// A facet carries generator `i` as a Minkowski summand exactly when its
/// normal is orthogonal to that generator (generators here are irredundant);
/// equivalently, when some facet edge is parallel to it.
pub fn zones(zonotope: &Zonotope, body: &Polytope) -> Vec<Zone> {
    (0..zonotope.generators.len())
        .map(|generator_id| {
            let g = &zonotope.generators[generator_id];
            let facet_ids = body
                .facets()
                .iter()
                .enumerate()
                .filter(|(_, f)| f.normal.dot(g).abs() <= 1e-8 * (1.0 + g.norm()))
                .map(|(fid, _)| fid)
                .collect();
            Zone {
                generator_id,
                facet_ids,
            }
        })
        .collect()
}

/// A zone is cubical when all of its facets are parallelepipeds: exactly
/// `n - 1` generators lie in the facet hyperplane and the facet has `2^{n-1}`
/// vertices.
pub fn is_cubical(zonotope: &Zonotope, body: &Polytope, zone: &Zone) -> bool {
    let n = zonotope.dim;
    zone.facet_ids.iter().all(|&fid| {
        let facet = body.facet(fid);
        let parallel = zonotope
            .generators
            .iter()
            .filter(|g| facet.normal.dot(g).abs() <= 1e-8 * (1.0 + g.norm()))
            .count();
        parallel == n - 1 && facet.vertex_ids.len() == 1 << (n - 1)
    })
}

/// Canonical form of an `(n+1)`-generator zonotope: a vector `y` in `[0,1]^n`
/// with `C_n + [-y, y]` affinely equivalent to the input, plus that affine
/// equivalence.
///
/// The kernel vector of the generator matrix is sign-normalized, its largest
/// entry moved last and the rest sorted in decreasing order, which makes the
/// form invariant under re-signing and permutation of the input generators.
pub fn canonical_form(
    generators: &[DVector<f64>],
    center: &DVector<f64>,
) -> Result<(DVector<f64>, AffineMap)> {
    let n = center.len();
    if generators.len() != n + 1 {
        return Err(Error::DegenerateInput(format!(
            "canonical form needs exactly {} generators, got {}",
            n + 1,
            generators.len()
        )));
    }
    // One padding row makes V^T square, exposing the kernel vector as its
    // last row.
    let mat = DMatrix::from_fn(n + 1, n + 1, |r, c| if r < n { generators[c][r] } else { 0.0 });
    let svd = mat.svd(false, true);
    let sv = &svd.singular_values;
    let max_sv = sv.iter().cloned().fold(0.0_f64, f64::max);
    if sv[n - 1] <= 1e-9 * max_sv {
        return Err(Error::RankDeficient);
    }
    let v_t = svd.v_t.expect("svd v_t");
    let mut lambda: Vec<f64> = (0..n + 1).map(|k| v_t[(n, k)]).collect();
    let mut gens: Vec<DVector<f64>> = generators.to_vec();
    let scale = lambda.iter().fold(0.0_f64, |m, &x| m.max(x.abs()));
    for k in 0..=n {
        if lambda[k].abs() <= 1e-12 * scale {
            lambda[k] = 0.0;
        } else if lambda[k] < 0.0 {
            lambda[k] = -lambda[k];
            gens[k] = -&gens[k];
        }
    }
    let last = (0..=n)
        .max_by(|&a, &b| lambda[a].total_cmp(&lambda[b]).then(a.cmp(&b)))
        .unwrap();
    let lambda_max = lambda[last];
    let mut rest: Vec<(f64, DVector<f64>)> = (0..=n)
        .filter(|&k| k != last)
        .map(|k| (lambda[k], gens[k].clone()))
        .collect();
    rest.sort_by(|a, b| b.0.total_cmp(&a.0));
    let y = DVector::from_iterator(n, rest.iter().map(|(l, _)| l / lambda_max));
    let matrix = DMatrix::from_fn(n, n, |r, c| rest[c].1[r]);
    let map = AffineMap {
        matrix,
        shift: center.clone(),
    };
    Ok((y, map))
}

/// Isotropic constant of `C_n + [-y, y]`.
pub fn l_of_y(y: &DVector<f64>) -> Result<f64> {
    assert!(y.iter().all(|&c| c >= 0.0), "y must be nonnegative");
    let n = y.len();
    let mut gens: Vec<DVector<f64>> = (0..n)
        .map(|i| {
            let mut e = DVector::zeros(n);
            e[i] = 1.0;
            e
        })
        .collect();
    gens.push(y.clone());
    let z = Zonotope::new(DVector::zeros(n), gens)?;
    Ok(isotropic_constant(&z.to_polytope()?)?.l)
}

/// Outcome of the grid search over `y` in `[0,1]^n`.
#[derive(Debug, Clone)]
pub struct ExtremalSearch {
    pub n: usize,
    pub grid_step: f64,
    /// `(y, L)` samples in lexicographic order of `y`.
    pub grid: Vec<(Vec<f64>, f64)>,
    pub max_l: f64,
    pub argmax: Vec<Vec<f64>>,
    pub min_l: f64,
    pub argmin: Vec<Vec<f64>>,
    pub refined_max: Option<(Vec<f64>, f64)>,
    pub refined_min: Option<(Vec<f64>, f64)>,
}

/// Evaluate `l_of_y` on the grid with the given step, report extrema and the
/// sets attaining them (within 1e-9), optionally refined by per-coordinate
/// golden-section passes.
pub fn extremal_search(n: usize, grid_step: f64, refine: bool) -> Result<ExtremalSearch> {
    if !(2..=4).contains(&n) {
        return Err(Error::DegenerateInput("extremal search supports n in 2..=4".into()));
    }
    let axis_steps = (1.0 / grid_step).round() as usize;
    if axis_steps == 0 || ((axis_steps as f64) * grid_step - 1.0).abs() > 1e-9 {
        return Err(Error::DegenerateInput("grid step must divide 1".into()));
    }
    let axis: Vec<f64> = (0..=axis_steps).map(|k| k as f64 * grid_step).collect();
    let mut ys: Vec<Vec<f64>> = vec![vec![]];
    for _ in 0..n {
        ys = ys
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&a| {
                    let mut y = prefix.clone();
                    y.push(a);
                    y
                })
            })
            .collect();
    }
    let ls: Vec<f64> = ys
        .par_iter()
        .map(|y| l_of_y(&DVector::from_column_slice(y)).expect("grid point evaluates"))
        .collect();
    let max_l = ls.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min_l = ls.iter().cloned().fold(f64::INFINITY, f64::min);
    let argmax: Vec<Vec<f64>> = ys
        .iter()
        .zip(&ls)
        .filter(|(_, &l)| l >= max_l - 1e-9)
        .map(|(y, _)| y.clone())
        .collect();
    let argmin: Vec<Vec<f64>> = ys
        .iter()
        .zip(&ls)
        .filter(|(_, &l)| l <= min_l + 1e-9)
        .map(|(y, _)| y.clone())
        .collect();
    let (refined_max, refined_min) = if refine {
        (
            Some(coordinate_refine(&argmax[0], true)?),
            Some(coordinate_refine(&argmin[0], false)?),
        )
    } else {
        (None, None)
    };
    Ok(ExtremalSearch {
        n,
        grid_step,
        grid: ys.into_iter().zip(ls).collect(),
        max_l,
        argmax,
        min_l,
        argmin,
        refined_max,
        refined_min,
    })
}

/// Cyclic per-coordinate golden-section optimization of `l_of_y` over the
/// unit box, run until the bracket width drops below 1e-4.
pub fn coordinate_refine(start: &[f64], maximize: bool) -> Result<(Vec<f64>, f64)> {
    let n = start.len();
    let mut y = start.to_vec();
    let eval = |y: &[f64]| l_of_y(&DVector::from_column_slice(y));
    let mut best = eval(&y)?;
    let sign = if maximize { 1.0 } else { -1.0 };
    for _cycle in 0..8 {
        let before = best;
        for coord in 0..n {
            let mut probe = y.clone();
            let mut f = |t: f64| -> Result<f64> {
                probe[coord] = t;
                eval(&probe)
            };
            let (t, value) = golden_section(&mut f, 0.0, 1.0, 1e-4, sign)?;
            if sign * value > sign * best {
                y[coord] = t;
                best = value;
            }
        }
        if (best - before).abs() <= 1e-12 {
            break;
        }
    }
    Ok((y, best))
}

fn golden_section(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
    width: f64,
    sign: f64,
) -> Result<(f64, f64)> {
    let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = sign * f(c)?;
    let mut fd = sign * f(d)?;
    while b - a > width {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = sign * f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = sign * f(d)?;
        }
    }
    // Also consider the interval ends; the optimum often sits on the boundary.
    let mid = 0.5 * (a + b);
    let mut cands = vec![(mid, sign * f(mid)?)];
    for t in [0.0, 1.0] {
        cands.push((t, sign * f(t)?));
    }
    let (t, fv) = cands
        .into_iter()
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .unwrap();
    Ok((t, sign * fv))
}
