//! Time stepping: stability limit, scheme accuracy, the driver loop, and
//! its termination conditions. The expanding sphere r(t) = r₀ e^{t/n} is
//! the exact solution every assertion leans on.

use approx::assert_relative_eq;
use imcf::flow::{
    cfl_timestep, rescaled_curve, run, stepper_by_name, stepper_names, FlowConfig, FlowError,
    TerminationReason,
};
use imcf::geometry::pointwise_geometry;
use imcf::initial::{make_sphere, make_tube_spheres, TubeSpheresParams};

fn radius_error(curve: &imcf::GeneratingCurve, expected: f64) -> f64 {
    (0..curve.len())
        .map(|i| {
            let d = (curve.x(i).powi(2) + curve.r(i).powi(2)).sqrt();
            (d - expected).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn stepper_registry_lists_schemes() {
    assert_eq!(stepper_names(), vec!["euler", "midpoint"]);
    assert!(stepper_by_name("euler").is_ok());
    assert!(matches!(
        stepper_by_name("leapfrog"),
        Err(FlowError::UnknownScheme(_))
    ));
}

/// On the unit sphere (H = 2, total length π) the stability step at
/// σ = 1/2 collapses to dt = ds² exactly.
#[test]
fn cfl_step_on_unit_sphere() {
    let curve = make_sphere(2, 1.0, 0.0, 400).unwrap();
    let geom = pointwise_geometry(&curve).unwrap();
    let ds = curve.mean_spacing();
    let dt = cfl_timestep(&geom, ds, 0.5, 0.0).unwrap();
    assert_relative_eq!(dt, ds * ds, max_relative = 1e-3);
}

#[test]
fn cfl_step_refuses_degenerate_speed() {
    let curve = make_sphere(2, 1.0, 0.0, 100).unwrap();
    let geom = pointwise_geometry(&curve).unwrap();
    // min H = 2 on the unit sphere; a stop threshold above that is a
    // degenerate-speed condition.
    let err = cfl_timestep(&geom, curve.mean_spacing(), 0.5, 10.0).unwrap_err();
    assert!(matches!(err, FlowError::DegenerateSpeed { .. }));
}

/// One Euler step moves every sphere sample out by exactly dt/H = dt/2:
/// the speed field is spatially constant there, so no shape error at all.
#[test]
fn euler_step_on_sphere_is_uniform_dilation() {
    let curve = make_sphere(2, 1.0, 0.0, 400).unwrap();
    let geom = pointwise_geometry(&curve).unwrap();
    let stepped = stepper_by_name("euler")
        .unwrap()
        .advance(&curve, &geom, 1e-4)
        .unwrap();
    let err = radius_error(&stepped, 1.0 + 5e-5);
    assert!(err < 1e-9, "radius deviation {err:e}");
}

/// The midpoint scheme is second order: on one sizable step its radius
/// error must be far below Euler's.
#[test]
fn midpoint_beats_euler_on_one_step() {
    let dt = 1e-2;
    let exact = (dt / 2.0f64).exp();
    let curve = make_sphere(2, 1.0, 0.0, 400).unwrap();
    let geom = pointwise_geometry(&curve).unwrap();
    let euler = stepper_by_name("euler").unwrap().advance(&curve, &geom, dt).unwrap();
    let midpoint = stepper_by_name("midpoint").unwrap().advance(&curve, &geom, dt).unwrap();
    let e_euler = radius_error(&euler, exact);
    let e_mid = radius_error(&midpoint, exact);
    assert!(
        e_mid < e_euler / 5.0,
        "midpoint error {e_mid:e} not well below euler error {e_euler:e}"
    );
}

#[test]
fn sphere_run_tracks_exponential_growth() {
    let config = FlowConfig {
        t_end: 1.0,
        sigma: 0.4,
        m: 400,
        ..FlowConfig::default()
    };
    let initial = make_sphere(2, 1.0, 0.0, 400).unwrap();
    let traj = run(&config, &initial).unwrap();
    assert!(matches!(traj.termination, TerminationReason::ReachedEnd));

    // Snapshots land exactly on the requested cadence.
    assert_eq!(traj.snapshots.len(), 21);
    for (k, snap) in traj.snapshots.iter().enumerate() {
        assert!((snap.t - 0.05 * k as f64).abs() < 1e-9);
    }

    // Final radius within a tenth of a percent of e^{1/2}.
    let expected = 0.5f64.exp();
    let final_curve = &traj.snapshots.last().unwrap().curve;
    let err = radius_error(final_curve, expected);
    assert!(err <= 1e-3, "final radius error {err:e}");

    // Area grows by e^t (tracked in the monitors too).
    let area0 = traj.monitors[0].area;
    let area1 = traj.monitors.last().unwrap().area;
    assert_relative_eq!(area1 / area0, 1.0f64.exp(), max_relative = 5e-3);

    // Rescaling by e^{−t/n} brings the final sphere back to radius 1.
    let rescaled = rescaled_curve(final_curve, 1.0);
    assert!(radius_error(&rescaled, 1.0) <= 1e-3);
}

#[test]
fn monitors_record_bridge_columns_as_nan_without_a_bridge() {
    let config = FlowConfig {
        t_end: 0.05,
        m: 200,
        ..FlowConfig::default()
    };
    let initial = make_sphere(2, 1.0, 0.0, 200).unwrap();
    let traj = run(&config, &initial).unwrap();
    for row in &traj.monitors {
        assert!(row.max_v_l.is_nan());
        assert!(row.pratio_l.is_nan());
        assert!(row.a.is_nan());
        assert!(row.b.is_nan());
        assert!(row.star);
        assert_eq!(row.critcount, 1);
        assert!(row.min_h > 0.0);
    }
}

#[test]
fn neck_stop_override_halts_the_run() {
    let initial = make_tube_spheres(2, TubeSpheresParams::new(8.0, 0.6, 600)).unwrap();
    let config = FlowConfig {
        t_end: 1.0,
        m: 600,
        // The waist starts at 0.6, below this stop, so the first check
        // after a step must end the run.
        neck_radius_stop: Some(0.65),
        ..FlowConfig::default()
    };
    let traj = run(&config, &initial).unwrap();
    match traj.termination {
        TerminationReason::NeckPinch { t, min_radius } => {
            assert!(t < 0.01, "stopped late, at t = {t}");
            assert!(min_radius < 0.65);
        }
        other => panic!("expected a neck-pinch stop, got {other:?}"),
    }
}

#[test]
fn short_tube_run_reaches_its_end_time() {
    let initial = make_tube_spheres(2, TubeSpheresParams::new(8.0, 0.6, 600)).unwrap();
    let config = FlowConfig {
        t_end: 0.02,
        m: 600,
        snapshot_dt: 0.01,
        ..FlowConfig::default()
    };
    let traj = run(&config, &initial).unwrap();
    assert!(matches!(traj.termination, TerminationReason::ReachedEnd));
    assert_eq!(traj.snapshots.len(), 3);
    assert!(traj.steps_total > 0);
    // The waist must have widened: this dumbbell flows toward a sphere.
    let first = &traj.monitors[0];
    let last = traj.monitors.last().unwrap();
    assert!(last.area > first.area);
}

#[test]
fn run_rejects_bad_configuration() {
    let initial = make_sphere(2, 1.0, 0.0, 100).unwrap();
    for config in [
        FlowConfig { t_end: -1.0, ..FlowConfig::default() },
        FlowConfig { sigma: 0.0, ..FlowConfig::default() },
        FlowConfig { sigma: 1.5, ..FlowConfig::default() },
        FlowConfig { resample_every: 0, ..FlowConfig::default() },
        FlowConfig { snapshot_dt: 0.0, ..FlowConfig::default() },
        FlowConfig { scheme: "leapfrog".into(), ..FlowConfig::default() },
    ] {
        assert!(
            run(&config, &initial).is_err(),
            "configuration accepted: {config:?}"
        );
    }
}

/// Surfaces that are not mean-convex cannot flow by 1/H from the start;
/// the driver reports that as a configuration error, not a crash.
#[test]
fn run_rejects_non_mean_convex_initial_surface() {
    // A deep-waisted dumbbell assembled directly from a profile with a
    // sharp dip: H < 0 at the waist.
    let k = 201;
    let xs: Vec<f64> = (0..k).map(|j| -2.0 + 4.0 * j as f64 / (k - 1) as f64).collect();
    let ys: Vec<f64> = xs
        .iter()
        .map(|x| 1.0 - 0.8 * (-8.0 * x * x).exp())
        .collect();
    let initial = imcf::initial::make_graph_surface(2, &xs, &ys, 400).unwrap();
    let geom = pointwise_geometry(&initial).unwrap();
    assert!(geom.min_h() <= 0.0, "test profile should not be mean-convex");
    let err = run(&FlowConfig::default(), &initial).unwrap_err();
    assert!(matches!(err, FlowError::InvalidConfig(_)));
}
