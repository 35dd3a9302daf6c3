//! Pointwise geometry, region decomposition, and global measurements on
//! surfaces whose exact values are known in closed form.

use approx::assert_relative_eq;
use imcf::curve::{CurveError, GeneratingCurve};
use imcf::geometry::{
    area, critical_point_count, curve_distance, decompose_regions, diameter, inradius,
    pointwise_geometry, roundness, star_center, strictly_contained, surface_laplacian,
};
use imcf::initial::{make_sphere, make_tube_spheres, TubeSpheresParams};

/// A sphere of radius R in R^{n+1} has rotational curvature p = 1/R,
/// meridian curvature k = 1/R, and mean curvature H = n/R at every point.
#[test]
fn sphere_curvatures_are_inverse_radius() {
    let curve = make_sphere(2, 2.0, 0.0, 400).unwrap();
    let geom = pointwise_geometry(&curve).unwrap();
    for i in 0..curve.len() {
        assert_relative_eq!(geom.k[i], 0.5, max_relative = 1e-9);
        assert_relative_eq!(geom.p[i], 0.5, max_relative = 1e-9);
        assert_relative_eq!(geom.h[i], 1.0, max_relative = 1e-9);
        assert_relative_eq!(geom.a2[i], 0.5, max_relative = 1e-9);
    }
}

#[test]
fn unit_sphere_mean_curvature_everywhere_including_poles() {
    let curve = make_sphere(2, 1.0, 0.0, 400).unwrap();
    let geom = pointwise_geometry(&curve).unwrap();
    let worst = geom
        .h
        .iter()
        .map(|h| (h - 2.0).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-3, "max |H - 2| = {worst:e}");
    // The poles are included in that sweep; check them explicitly too.
    assert_relative_eq!(geom.h[0], 2.0, max_relative = 1e-9);
    assert_relative_eq!(geom.h[curve.len() - 1], 2.0, max_relative = 1e-9);
}

/// In higher ambient dimension the same circle has H = n/R.
#[test]
fn mean_curvature_scales_with_dimension() {
    for n in [2usize, 3, 5] {
        let curve = make_sphere(n, 2.0, 0.0, 200).unwrap();
        let geom = pointwise_geometry(&curve).unwrap();
        for i in 0..curve.len() {
            assert_relative_eq!(geom.h[i], n as f64 / 2.0, max_relative = 1e-9);
        }
    }
}

/// On the cylindrical middle of the tube the profile is flat (k = 0), so
/// H = (n−1)·p = (n−1)/c.
#[test]
fn tube_waist_has_cylinder_curvature() {
    let params = TubeSpheresParams::new(8.0, 0.6, 1201);
    let curve = make_tube_spheres(2, params).unwrap();
    let geom = pointwise_geometry(&curve).unwrap();
    let mid = curve.len() / 2; // odd sample count ⇒ exact middle, x = 0
    assert!(curve.x(mid).abs() < 1e-9);
    assert_relative_eq!(geom.h[mid], 1.0 / 0.6, max_relative = 1e-2);
    assert!(geom.k[mid].abs() < 1e-2);
}

#[test]
fn laplacian_annihilates_constants() {
    let curve = make_sphere(2, 1.5, 0.3, 200).unwrap();
    let ones = vec![1.0; curve.len()];
    let lap = surface_laplacian(&curve, &ones).unwrap();
    for (i, l) in lap.iter().enumerate() {
        assert!(l.abs() < 1e-9, "Δ1 = {l:e} at sample {i}");
    }
}

/// Coordinate functions restricted to the unit n-sphere are eigenfunctions
/// of the Laplace–Beltrami operator: Δx = −n x.
#[test]
fn laplacian_eigenfunction_on_unit_sphere() {
    let curve = make_sphere(2, 1.0, 0.0, 400).unwrap();
    let xs: Vec<f64> = (0..curve.len()).map(|i| curve.x(i)).collect();
    let lap = surface_laplacian(&curve, &xs).unwrap();
    for i in 0..curve.len() {
        assert!(
            (lap[i] + 2.0 * xs[i]).abs() < 2e-2,
            "Δx = {} vs −2x = {} at sample {i}",
            lap[i],
            -2.0 * xs[i]
        );
    }
}

/// The height function satisfies Δu = (n−1)/u − H⟨ν, ŵ⟩ identically; the
/// discrete residual should shrink at second order under refinement.
#[test]
fn height_identity_residual_converges() {
    let residual = |m: usize| -> f64 {
        let curve = make_sphere(2, 1.0, 0.0, m).unwrap();
        let geom = pointwise_geometry(&curve).unwrap();
        let u: Vec<f64> = (0..curve.len()).map(|i| curve.r(i)).collect();
        let lap = surface_laplacian(&curve, &u).unwrap();
        // The identity degenerates at the poles (u → 0); measure away from them.
        let margin = m / 10;
        (margin..m - margin)
            .map(|i| (lap[i] - (1.0 / u[i] - geom.h[i] * geom.nu_w[i])).abs())
            .fold(0.0, f64::max)
    };
    let coarse = residual(200);
    let fine = residual(400);
    let order = (coarse / fine).log2();
    assert!(
        order >= 1.8,
        "residual order {order:.2} (coarse {coarse:e}, fine {fine:e})"
    );
}

#[test]
fn sphere_decomposes_into_two_caps_and_no_bridge() {
    let curve = make_sphere(2, 1.0, 0.0, 401).unwrap();
    let geom = pointwise_geometry(&curve).unwrap();
    let regions = decompose_regions(&curve, &geom);
    assert!(regions.bridge_is_empty());
    assert!(regions.bridge_interior().is_none());
    assert_eq!(regions.cap_minus_start, regions.cap_plus_end + 1);
    // No bridge ⇒ no interpolated boundaries.
    assert!(regions.a.is_none() && regions.b.is_none());
    // The caps meet at the equator, where ⟨ν, e₁⟩ changes sign.
    assert!(curve.x(regions.cap_plus_end).abs() < 1e-2);
}

#[test]
fn tube_bridge_is_symmetric() {
    let params = TubeSpheresParams::new(8.0, 0.6, 1200);
    let curve = make_tube_spheres(2, params).unwrap();
    let geom = pointwise_geometry(&curve).unwrap();
    let regions = decompose_regions(&curve, &geom);
    assert!(!regions.bridge_is_empty());
    let (a, b) = (regions.a.unwrap(), regions.b.unwrap());
    // By reflection symmetry the two boundary abscissae are mirror images,
    // and they sit near the tops of the end spheres at x = ±(ℓ+1) = ±9.
    assert!((a + b).abs() < 1e-6, "a = {a}, b = {b}");
    assert!(a < 0.0 && b > 0.0);
    assert!((b - 9.0).abs() < 0.1, "b = {b}");
    // The bridge radii dip to the waist value c while the caps reach 1.
    let (lo, hi) = regions.bridge_closure().unwrap();
    let min_r = (lo..=hi).map(|i| curve.r(i)).fold(f64::INFINITY, f64::min);
    assert_relative_eq!(min_r, 0.6, max_relative = 1e-3);
}

#[test]
fn critical_count_distinguishes_sphere_from_tube() {
    let sphere = make_sphere(2, 1.0, 0.0, 400).unwrap();
    let geom_s = pointwise_geometry(&sphere).unwrap();
    assert_eq!(critical_point_count(&geom_s), 1);

    let params = TubeSpheresParams::new(8.0, 0.6, 1200);
    let tube = make_tube_spheres(2, params).unwrap();
    let geom_t = pointwise_geometry(&tube).unwrap();
    assert_eq!(critical_point_count(&geom_t), 3);
}

#[test]
fn sphere_area_matches_closed_form() {
    // |S^2_R| = 4πR².
    let curve = make_sphere(2, 1.0, 0.0, 800).unwrap();
    assert_relative_eq!(area(&curve), 4.0 * std::f64::consts::PI, max_relative = 1e-3);
    let curve = make_sphere(2, 2.5, 0.0, 800).unwrap();
    assert_relative_eq!(
        area(&curve),
        4.0 * std::f64::consts::PI * 6.25,
        max_relative = 1e-3
    );
    // |S^3_R| = 2π²R³.
    let curve = make_sphere(3, 2.0, 0.0, 800).unwrap();
    assert_relative_eq!(
        area(&curve),
        2.0 * std::f64::consts::PI.powi(2) * 8.0,
        max_relative = 1e-3
    );
}

#[test]
fn diameter_and_inradius_of_known_shapes() {
    let sphere = make_sphere(2, 1.0, 0.0, 400).unwrap();
    assert_relative_eq!(diameter(&sphere), 2.0, max_relative = 1e-3);
    let (r_in, center) = inradius(&sphere);
    assert_relative_eq!(r_in, 1.0, max_relative = 1e-3);
    assert!(center.abs() < 1e-3);

    // Tube: spheres of radius 1 centered at ±(ℓ+1) = ±9 span [−10, 10].
    let params = TubeSpheresParams::new(8.0, 0.6, 1200);
    let tube = make_tube_spheres(2, params).unwrap();
    assert_relative_eq!(diameter(&tube), 20.0, max_relative = 5e-3);
    let (r_in_t, _) = inradius(&tube);
    assert_relative_eq!(r_in_t, 1.0, max_relative = 1e-2);
}

#[test]
fn star_center_found_for_spheres_but_not_tube() {
    let sphere = make_sphere(2, 1.0, 0.0, 400).unwrap();
    let geom = pointwise_geometry(&sphere).unwrap();
    let (c, margin) = star_center(&sphere, &geom).unwrap();
    assert!(c.abs() < 1e-3);
    assert_relative_eq!(margin, 1.0, max_relative = 1e-3);

    // Same sphere shifted along the axis: the optimal center follows it.
    let shifted = make_sphere(2, 1.0, 0.3, 400).unwrap();
    let geom_s = pointwise_geometry(&shifted).unwrap();
    let (c_s, margin_s) = star_center(&shifted, &geom_s).unwrap();
    assert_relative_eq!(c_s, 0.3, epsilon = 1e-3);
    assert_relative_eq!(margin_s, 1.0, max_relative = 1e-3);

    // The dumbbell admits no center: rays from any axis point cross the
    // neck tangentially.
    let params = TubeSpheresParams::new(8.0, 0.6, 1200);
    let tube = make_tube_spheres(2, params).unwrap();
    let geom_t = pointwise_geometry(&tube).unwrap();
    assert!(star_center(&tube, &geom_t).is_none());
}

#[test]
fn distance_between_concentric_spheres() {
    let inner = make_sphere(2, 1.0, 0.0, 400).unwrap();
    let outer = make_sphere(2, 3.0, 0.0, 400).unwrap();
    assert_relative_eq!(curve_distance(&inner, &outer), 2.0, max_relative = 1e-3);
    assert!(strictly_contained(&inner, &outer));
    assert!(!strictly_contained(&outer, &inner));
}

#[test]
fn resampling_stays_on_the_circle_and_equalizes_spacing() {
    // A coarse semicircle, resampled finer, should stay within 1e−4 of the
    // true circle and come out uniformly spaced.
    let m0 = 33;
    let mut points = Vec::with_capacity(m0);
    for j in 0..m0 {
        let theta = std::f64::consts::PI * j as f64 / (m0 - 1) as f64;
        points.push([theta.cos(), theta.sin()]);
    }
    points[0] = [1.0, 0.0];
    points[m0 - 1] = [-1.0, 0.0];
    let coarse = GeneratingCurve::new(2, points).unwrap();
    let fine = coarse.resample_uniform(65).unwrap();
    for i in 0..fine.len() {
        let radius = (fine.x(i).powi(2) + fine.r(i).powi(2)).sqrt();
        assert!(
            (radius - 1.0).abs() < 1e-4,
            "sample {i} drifted off the circle by {:e}",
            (radius - 1.0).abs()
        );
    }
    assert!(fine.spacing_deviation() < 0.01);
}

#[test]
fn validation_rejects_bad_profiles() {
    // Interior sample on the axis.
    let err = GeneratingCurve::new(
        2,
        vec![[1.0, 0.0], [0.5, 0.5], [0.0, 0.0], [-0.5, 0.5], [-1.0, 0.0]],
    )
    .unwrap_err();
    assert!(matches!(err, CurveError::InteriorOnAxis { .. }));

    // Pole off the axis.
    let err = GeneratingCurve::new(
        2,
        vec![[1.0, 0.1], [0.5, 0.5], [0.0, 0.7], [-0.5, 0.5], [-1.0, 0.0]],
    )
    .unwrap_err();
    assert!(matches!(err, CurveError::PoleOffAxis { .. }));

    // Wrong orientation (left pole first).
    let err = GeneratingCurve::new(
        2,
        vec![[-1.0, 0.0], [-0.5, 0.5], [0.0, 0.7], [0.5, 0.5], [1.0, 0.0]],
    )
    .unwrap_err();
    assert!(matches!(err, CurveError::WrongOrientation { .. }));

    // A figure-eight profile self-intersects.
    let err = GeneratingCurve::new(
        2,
        vec![
            [1.0, 0.0],
            [0.2, 0.8],
            [-0.4, 0.3],
            [0.4, 0.3],
            [-0.2, 0.8],
            [-1.0, 0.0],
        ],
    )
    .unwrap_err();
    assert!(matches!(err, CurveError::SelfIntersection { .. }));
}

#[test]
fn roundness_of_circle_and_ellipse() {
    let sphere = make_sphere(2, 1.7, 0.4, 400).unwrap();
    assert!(roundness(&sphere) < 1e-3);

    // Ellipse with semi-axes 2 and 1 about its center: radial extremes 2
    // and 1, so the spread over the mean is (2−1)/1.5 = 2/3.
    let m = 401;
    let mut points = Vec::with_capacity(m);
    for j in 0..m {
        let theta = std::f64::consts::PI * j as f64 / (m - 1) as f64;
        points.push([2.0 * theta.cos(), theta.sin()]);
    }
    points[0] = [2.0, 0.0];
    points[m - 1] = [-2.0, 0.0];
    let ellipse = GeneratingCurve::new(2, points).unwrap();
    assert_relative_eq!(roundness(&ellipse), 2.0 / 3.0, epsilon = 0.01);
}
