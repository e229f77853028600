use approx::assert_relative_eq;
use nalgebra::DVector;

use super::*;
use crate::geom::shapes::{cross_polytope, cube, pyramid, standard_simplex};
use crate::isotropy::{cube_constant, isotropize};

fn v(s: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(s)
}

fn iso(p: &Polytope) -> Polytope {
    isotropize(p).unwrap().0
}

#[test]
fn time_zero_is_identity() {
    let p = iso(&standard_simplex(3));
    let field = SpeedField::new(&p, v(&[1.0, 0.0, 0.0]), vec![0.25; 4], false).unwrap();
    let q = move_body(&p, &field, 0.0).unwrap();
    assert_eq!(q.vertices().len(), p.vertices().len());
    for w in p.vertices() {
        assert!(q.vertices().iter().any(|u| (u - w).norm() <= 1e-12));
    }
}

#[test]
fn affine_field_keeps_l_constant() {
    // Speeds affine in the vertex coordinates with gradient orthogonal to the
    // direction: the deformation runs through affine images only.
    let p = iso(&standard_simplex(3));
    let direction = v(&[0.0, 0.0, 1.0]);
    let speeds: Vec<f64> = p.vertices().iter().map(|x| 0.3 * x[0] - 0.1 * x[1] + 0.2).collect();
    let field = SpeedField::new(&p, direction, speeds, false).unwrap();
    assert!(field.is_affine(&p));
    let scan = scan(&p, &field, -0.4, 0.4, 17).unwrap();
    assert!(scan.valid.iter().all(|&ok| ok));
    let l0 = scan.ls[8];
    for &l in &scan.ls {
        assert!((l - l0).abs() <= 1e-8);
    }
    assert!(scan.convexity_certificate.unwrap().abs() <= 1e-8);
}

#[test]
fn vertex_move_matches_explicit_hull() {
    let p = iso(&standard_simplex(3));
    let vid = 0usize;
    let rid = (0..p.ridges().len())
        .find(|&r| p.ridge(r).vertex_ids.contains(&vid))
        .unwrap();
    let field = vertex_move_field(&p, vid, rid, false).unwrap();
    let t = 0.05;
    let moved = move_body(&p, &field, t).unwrap();
    let mut pts: Vec<DVector<f64>> = p
        .vertices()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != vid)
        .map(|(_, w)| w.clone())
        .collect();
    pts.push(p.vertex(vid) + field.direction() * t);
    let explicit = Polytope::from_points(&pts, 3).unwrap();
    assert_eq!(moved.vertices().len(), explicit.vertices().len());
    for w in explicit.vertices() {
        assert!(moved.vertices().iter().any(|u| (u - w).norm() <= 1e-10));
    }
}

#[test]
fn simplex_vertex_move_is_affine() {
    // The vertices at rest span a hyperplane, so the interpolated field is
    // affine and the deformation shears the simplex without changing L. This
    // is why strict-convexity statements need non-simplex bodies.
    let p = iso(&standard_simplex(3));
    let vid = 0usize;
    let rid = (0..p.ridges().len())
        .find(|&r| p.ridge(r).vertex_ids.contains(&vid))
        .unwrap();
    let field = vertex_move_field(&p, vid, rid, false).unwrap();
    assert!(field.is_affine(&p));
    let scan = scan(&p, &field, -0.4, 0.4, 9).unwrap();
    let l0 = scan.ls[4];
    for &l in &scan.ls {
        assert!((l - l0).abs() <= 1e-8);
    }
}

#[test]
fn octahedron_odd_pair_move_is_affine() {
    // Moving a vertex and its antipode together is the linear shear x_1 -> t
    // slice; speeds fit an affine function exactly.
    let p = iso(&cross_polytope(3));
    let vid = 0usize;
    let rid = (0..p.ridges().len())
        .find(|&r| p.ridge(r).vertex_ids.contains(&vid))
        .unwrap();
    let field = vertex_move_field(&p, vid, rid, true).unwrap();
    assert!(field.odd());
    assert!(field.is_affine(&p));
    let scan = scan(&p, &field, -0.3, 0.3, 13).unwrap();
    let l0 = scan.ls[6];
    for (k, &ok) in scan.valid.iter().enumerate() {
        assert!(ok);
        assert!((scan.ls[k] - l0).abs() <= 1e-8);
        // SRS closure: every body along an odd movement stays symmetric.
        let body = move_body(&p, &field, scan.ts[k]).unwrap();
        assert!(body.symmetry_center().is_some());
    }
}

#[test]
fn octahedron_single_vertex_move_is_strictly_convex() {
    let p = iso(&cross_polytope(3));
    let vid = 0usize;
    let rid = (0..p.ridges().len())
        .find(|&r| p.ridge(r).vertex_ids.contains(&vid))
        .unwrap();
    let field = vertex_move_field(&p, vid, rid, false).unwrap();
    assert!(!field.is_affine(&p));
    let steps = 21;
    let scan = scan(&p, &field, -0.5, 0.5, steps).unwrap();
    assert!(scan.valid.iter().all(|&ok| ok));
    let cert = scan.convexity_certificate.unwrap();
    assert!(cert >= -1e-7);
    let l0 = scan.ls[steps / 2];
    assert!(cert > 1e-6 * l0 / (steps * steps) as f64, "certificate {cert}");
}

#[test]
fn skew_pyramid_apex_fails_to_factor() {
    // Trapezoid base: pyramids over parallelograms are affinely symmetric and
    // would factor at every ridge.
    let base = Polytope::from_points(
        &[v(&[-2.0, 0.0]), v(&[2.0, 0.0]), v(&[1.0, 1.0]), v(&[-1.0, 1.0])],
        2,
    )
    .unwrap();
    let p = iso(&pyramid(&base, &v(&[0.0, 0.5, 1.0])).unwrap());
    let apex = p.vertices().len() - 1;
    let failing = (0..p.ridges().len())
        .filter(|&r| p.ridge(r).vertex_ids.contains(&apex))
        .find(|&r| matches!(vertex_move_field(&p, apex, r, false), Err(Error::FactoringFailure(_))));
    assert!(failing.is_some());
}

#[test]
fn field_validation_errors() {
    let square = cube(2);
    // (1, 1) and (1, -1) share the fiber along e_1 but get different speeds.
    let vid_a = square.vertices().iter().position(|w| w[0] > 0.0 && w[1] > 0.0).unwrap();
    let mut speeds = vec![0.0; 4];
    speeds[vid_a] = 1.0;
    assert!(matches!(
        SpeedField::new(&square, v(&[1.0, 0.0]), speeds, false),
        Err(Error::FactoringFailure(_))
    ));
    // Odd flag with non-antisymmetric speeds.
    assert!(matches!(
        SpeedField::new(&square, v(&[1.0, 1.0]), vec![1.0, 1.0, 1.0, 1.0], true),
        Err(Error::InvalidMovement(_))
    ));
    assert!(matches!(
        SpeedField::new(&square, v(&[0.0, 0.0]), vec![0.0; 4], false),
        Err(Error::InvalidMovement(_))
    ));
}

#[test]
fn vertex_pushed_inside_invalidates_movement() {
    let mut pts: Vec<DVector<f64>> = cube(2).vertices().to_vec();
    pts.push(v(&[0.0, 2.0]));
    let p = Polytope::from_points(&pts, 2).unwrap();
    let apex = p.vertices().iter().position(|w| w[1] > 1.5).unwrap();
    let mut speeds = vec![0.0; p.vertices().len()];
    speeds[apex] = -1.0;
    let field = SpeedField::new(&p, v(&[0.0, 1.0]), speeds, false).unwrap();
    // Apex on the top edge: still a boundary point, still valid.
    assert!(move_body(&p, &field, 1.0).is_ok());
    // Apex strictly inside: the vertexwise image no longer represents K_t.
    assert!(matches!(
        move_body(&p, &field, 1.5),
        Err(Error::InvalidMovement(_))
    ));

    let scan = scan(&p, &field, 0.0, 2.0, 5).unwrap();
    assert_eq!(scan.valid, vec![true, true, true, false, false]);
    assert_eq!(scan.window, (0, 2));
    assert!(scan.ls[4].is_nan());
}

#[test]
fn hexagon_family_interval_and_endpoints() {
    let (body, field, interval) = zonotope_move_field(&v(&[1.0, 1.0]), 0, 1).unwrap();
    assert_eq!(interval, [-1.0, 1.0]);
    assert_eq!(body.vertices().len(), 6);
    assert!(!field.is_affine(&body));
    let end = move_body(&body, &field, 1.0).unwrap();
    assert_eq!(end.vertices().len(), 4);
    let l_end = crate::isotropy::isotropic_constant(&end).unwrap().l;
    assert_relative_eq!(l_end, cube_constant(), epsilon = 1e-12);
}

#[test]
fn hexagon_scan_is_strictly_convex_and_symmetric() {
    let (body, field, interval) = zonotope_move_field(&v(&[1.0, 1.0]), 0, 1).unwrap();
    let steps = 41;
    let scan = scan(&body, &field, interval[0], interval[1], steps).unwrap();
    assert!(scan.valid.iter().all(|&ok| ok));
    let cert = scan.convexity_certificate.unwrap();
    assert!(cert >= -1e-7);
    let l0 = scan.ls[steps / 2];
    assert!(cert > 1e-6 * l0 / (steps * steps) as f64);
    assert_relative_eq!(scan.ls[0], cube_constant(), epsilon = 1e-9);
    assert_relative_eq!(scan.ls[steps - 1], cube_constant(), epsilon = 1e-9);
    // The movement swaps coordinates end to end: L(a + r) = L(b - r).
    for k in 0..steps {
        assert_relative_eq!(scan.ls[k], scan.ls[steps - 1 - k], epsilon = 1e-9);
    }
    // Minimum sits at t = 0, the most balanced generator.
    let argmin = (0..steps).min_by(|&a, &b| scan.ls[a].total_cmp(&scan.ls[b])).unwrap();
    assert_eq!(argmin, steps / 2);
    // Every body along the odd family stays centrally symmetric.
    for &t in &scan.ts {
        let b = move_body(&body, &field, t).unwrap();
        assert!(b.symmetry_center().is_some());
    }
}

#[test]
fn asymmetric_zonotope_scan_is_endpoint_mirrored() {
    // Z_{a+r} is the coordinate swap of Z_{b-r} for any starting generator,
    // so L matches across the interval midpoint even when z_i != z_j.
    let (body, field, interval) = zonotope_move_field(&v(&[0.5, 0.9, 0.7]), 0, 1).unwrap();
    assert_eq!(interval, [-0.5, 0.9]);
    let steps = 29;
    let s = scan(&body, &field, interval[0], interval[1], steps).unwrap();
    assert!(s.valid.iter().all(|&ok| ok));
    for k in 0..steps {
        assert_relative_eq!(s.ls[k], s.ls[steps - 1 - k], epsilon = 1e-9);
    }
    assert!(s.convexity_certificate.unwrap() >= -1e-7);
}

#[test]
fn volume_stays_continuous_along_scans() {
    let (body, field, interval) = zonotope_move_field(&v(&[1.0, 1.0]), 0, 1).unwrap();
    let hex_scan = scan(&body, &field, interval[0], interval[1], 41).unwrap();

    let p = iso(&cross_polytope(3));
    let rid = (0..p.ridges().len())
        .find(|&r| p.ridge(r).vertex_ids.contains(&0))
        .unwrap();
    let field2 = vertex_move_field(&p, 0, rid, false).unwrap();
    let oct_scan = scan(&p, &field2, -0.5, 0.5, 41).unwrap();

    for s in [hex_scan, oct_scan] {
        let dt = s.ts[1] - s.ts[0];
        let vols: Vec<f64> = s.volumes.clone();
        let range = vols.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - vols.iter().cloned().fold(f64::INFINITY, f64::min);
        let span = s.ts[s.ts.len() - 1] - s.ts[0];
        let bound = 10.0 * (range / span) * dt + 1e-9 * (1.0 + vols[0]);
        for w in vols.windows(2) {
            assert!((w[1] - w[0]).abs() <= bound, "volume jump {} > {}", (w[1] - w[0]).abs(), bound);
        }
    }
}

#[test]
fn zonotope_field_guards() {
    assert!(matches!(
        zonotope_move_field(&v(&[0.0, 0.0]), 0, 1),
        Err(Error::InvalidMovement(_))
    ));
    assert!(matches!(
        zonotope_move_field(&v(&[1.0, 1.0]), 1, 1),
        Err(Error::InvalidMovement(_))
    ));
    assert!(matches!(
        zonotope_move_field(&v(&[1.0, -0.5]), 0, 1),
        Err(Error::InvalidMovement(_))
    ));
    let (_, _, interval) = zonotope_move_field(&v(&[2.0, 1.0, 0.0]), 0, 1).unwrap();
    assert_eq!(interval, [-2.0, 1.0]);
}
