//! Explicit time stepping for inverse mean curvature flow.
//!
//! The surface moves with outward normal speed 1/H. The generating curve is
//! advanced sample-by-sample, ρ_i ← ρ_i + dt · ν_i / H_i, under the
//! parabolic stability restriction
//!
//! ```text
//! dt = σ · (min H)² · ds² / 2,          σ ∈ (0, 1],
//! ```
//!
//! since linearizing the speed gives the diffusion operator H⁻²Δ. Two
//! stepping schemes are provided behind a common [`Stepper`] interface and
//! selected by name: plain forward Euler (`"euler"`) and the explicit
//! midpoint rule (`"midpoint"`, one order better in dt at twice the cost).
//!
//! [`run`] integrates from an initial curve to a final time, recording a
//! snapshot plus a row of scalar monitors at every multiple of the snapshot
//! cadence (time steps are clipped so snapshot times are hit exactly, which
//! also aligns snapshots between runs for pairwise comparisons). The sample
//! spacing is re-uniformized every few steps; self-intersection and
//! embeddedness are swept at snapshot cadence. Runs never abort on
//! mathematical degeneration — they stop and record a
//! [`TerminationReason`].

use crate::curve::{CurveError, GeneratingCurve};
use crate::geometry::{self, GeometryError, GeometrySamples};
use crate::tol;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Failures to set up or advance a flow.
#[derive(Debug, Error)]
pub enum FlowError {
    /// The configured time-step law cannot produce a usable dt.
    #[error("mean curvature too small to step: min H = {min_h:.6e} at or below stop threshold {stop:.6e}")]
    DegenerateSpeed { min_h: f64, stop: f64 },

    /// The requested stepping scheme is not registered.
    #[error("unknown stepping scheme '{0}' (available: euler, midpoint)")]
    UnknownScheme(String),

    /// A configuration field is out of range.
    #[error("invalid flow configuration: {0}")]
    InvalidConfig(String),

    /// The advanced curve violated a representation invariant.
    #[error(transparent)]
    Curve(#[from] CurveError),

    /// Geometry of a curve could not be evaluated.
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Flow integration parameters. `h_min_stop` and `neck_radius_stop` default
/// (when `None`) to scale-aware values derived from the initial surface.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlowConfig {
    /// Final flow time T.
    pub t_end: f64,
    /// CFL safety factor σ in dt = σ (min H)² ds² / 2.
    pub sigma: f64,
    /// Working sample count M (the initial curve is resampled to this).
    pub m: usize,
    /// Steps between arc-length reparametrizations.
    pub resample_every: usize,
    /// Flow time between recorded snapshots.
    pub snapshot_dt: f64,
    /// Stepping scheme name (see [`stepper_names`]).
    pub scheme: String,
    /// Stop when min H falls to this value; `None` → 10⁻⁴ / initial scale.
    pub h_min_stop: Option<f64>,
    /// Stop when an interior radius falls below this; `None` → 10⁻³ × the
    /// smallest initial bridge radius (or smallest interior radius if the
    /// bridge is empty).
    pub neck_radius_stop: Option<f64>,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            t_end: 1.0,
            sigma: tol::DEFAULT_SIGMA,
            m: 400,
            resample_every: tol::DEFAULT_RESAMPLE_EVERY,
            snapshot_dt: tol::DEFAULT_SNAPSHOT_DT,
            scheme: "euler".to_string(),
            h_min_stop: None,
            neck_radius_stop: None,
        }
    }
}

/// Why a run stopped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum TerminationReason {
    /// Integrated to T as configured.
    ReachedEnd,
    /// min H fell to the stop threshold — the speed 1/H degenerated.
    DegenerateSpeed { t: f64, min_h: f64 },
    /// An interior radius fell to the neck-pinch threshold.
    NeckPinch { t: f64, min_radius: f64 },
    /// The curve stopped being simple/embedded or geometry broke down.
    InvariantBreach { t: f64, detail: String },
}

impl std::fmt::Display for TerminationReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::ReachedEnd => write!(f, "reached configured end time"),
            Self::DegenerateSpeed { t, min_h } => {
                write!(f, "degenerate speed at t = {t:.6} (min H = {min_h:.3e})")
            }
            Self::NeckPinch { t, min_radius } => {
                write!(f, "neck pinch at t = {t:.6} (min radius = {min_radius:.3e})")
            }
            Self::InvariantBreach { t, detail } => {
                write!(f, "invariant breach at t = {t:.6}: {detail}")
            }
        }
    }
}

/// One row of per-snapshot scalar monitors.
#[derive(Debug, Clone, PartialEq)]
pub struct MonitorRow {
    /// Flow time.
    pub t: f64,
    /// min / max mean curvature over the samples.
    pub min_h: f64,
    pub max_h: f64,
    /// min (interior) / max height u = r.
    pub min_u: f64,
    pub max_u: f64,
    /// max |ũ| = max |x| over the samples.
    pub max_au: f64,
    /// max graph gradient v over the bridge (NaN when the bridge is empty).
    pub max_v_l: f64,
    /// Oscillation ratio of p over the closed bridge (NaN when empty).
    pub pratio_l: f64,
    /// Hypersurface measure |N_t|.
    pub area: f64,
    /// Bridge boundary abscissas (NaN when the bridge is empty).
    pub a: f64,
    pub b: f64,
    /// Radial oscillation of the (rescaled) surface about its centroid.
    pub roundness: f64,
    /// Whether an axis center sees the surface star-shaped.
    pub star: bool,
    /// Critical points of the width function (sign changes of ⟨ν, e₁⟩).
    pub critcount: usize,
}

/// A recorded state of the flow.
#[derive(Debug, Clone)]
pub struct Snapshot {
    /// Flow time.
    pub t: f64,
    /// The generating curve at that time.
    pub curve: GeneratingCurve,
}

/// A completed (or stopped) run: snapshots, monitors, and how it ended.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Hypersurface dimension n.
    pub n: usize,
    /// The configuration the run used.
    pub config: FlowConfig,
    /// Snapshots at multiples of the snapshot cadence (t = 0 included).
    pub snapshots: Vec<Snapshot>,
    /// One monitor row per snapshot.
    pub monitors: Vec<MonitorRow>,
    /// Why the run stopped.
    pub termination: TerminationReason,
    /// Total number of time steps taken.
    pub steps_total: u64,
}

/// Current state of an integration in progress.
#[derive(Debug, Clone)]
pub struct FlowState {
    /// The evolving curve.
    pub curve: GeneratingCurve,
    /// Flow time.
    pub t: f64,
    /// Steps taken so far.
    pub step: u64,
    /// Geometry of `curve` (kept in sync by the integrator).
    pub geom: GeometrySamples,
}

impl FlowState {
    /// Wraps an initial curve, evaluating its geometry.
    pub fn new(curve: GeneratingCurve) -> Result<Self, FlowError> {
        let geom = geometry::pointwise_geometry(&curve)?;
        Ok(Self { curve, t: 0.0, step: 0, geom })
    }
}

/// A time-stepping scheme: advances a curve by one explicit step of size dt
/// with normal velocity ν/H evaluated per the scheme's rule.
pub trait Stepper: Sync {
    /// Registry name of the scheme.
    fn name(&self) -> &'static str;

    /// One step of size `dt` from `(curve, geom)`. Pole radii stay pinned
    /// to the axis (poles translate along it).
    fn advance(
        &self,
        curve: &GeneratingCurve,
        geom: &GeometrySamples,
        dt: f64,
    ) -> Result<GeneratingCurve, FlowError>;
}

/// Moves every sample by dt · ν/H using the supplied geometry.
fn euler_displace(
    curve: &GeneratingCurve,
    geom: &GeometrySamples,
    dt: f64,
) -> Result<GeneratingCurve, FlowError> {
    let m = curve.len();
    let mut pts = Vec::with_capacity(m);
    for i in 0..m {
        let s = dt / geom.h[i];
        pts.push([
            curve.x(i) + s * geom.normal[i][0],
            curve.r(i) + s * geom.normal[i][1],
        ]);
    }
    pts[0][1] = 0.0;
    pts[m - 1][1] = 0.0;
    Ok(curve.with_points_unswept(pts)?)
}

/// Forward Euler: velocity from the current state.
struct EulerStepper;

impl Stepper for EulerStepper {
    fn name(&self) -> &'static str {
        "euler"
    }

    fn advance(
        &self,
        curve: &GeneratingCurve,
        geom: &GeometrySamples,
        dt: f64,
    ) -> Result<GeneratingCurve, FlowError> {
        euler_displace(curve, geom, dt)
    }
}

/// Explicit midpoint: velocity re-evaluated at the half step and applied to
/// the original samples — second-order in dt.
struct MidpointStepper;

impl Stepper for MidpointStepper {
    fn name(&self) -> &'static str {
        "midpoint"
    }

    fn advance(
        &self,
        curve: &GeneratingCurve,
        geom: &GeometrySamples,
        dt: f64,
    ) -> Result<GeneratingCurve, FlowError> {
        let half = euler_displace(curve, geom, 0.5 * dt)?;
        let half_geom = geometry::pointwise_geometry(&half)?;
        let m = curve.len();
        let mut pts = Vec::with_capacity(m);
        for i in 0..m {
            let s = dt / half_geom.h[i];
            pts.push([
                curve.x(i) + s * half_geom.normal[i][0],
                curve.r(i) + s * half_geom.normal[i][1],
            ]);
        }
        pts[0][1] = 0.0;
        pts[m - 1][1] = 0.0;
        Ok(curve.with_points_unswept(pts)?)
    }
}

/// The registered stepping schemes.
pub fn steppers() -> &'static [&'static dyn Stepper] {
    static REGISTRY: [&dyn Stepper; 2] = [&EulerStepper, &MidpointStepper];
    &REGISTRY
}

/// Names of the registered stepping schemes.
pub fn stepper_names() -> Vec<&'static str> {
    steppers().iter().map(|s| s.name()).collect()
}

/// Looks a stepping scheme up by name.
pub fn stepper_by_name(name: &str) -> Result<&'static dyn Stepper, FlowError> {
    steppers()
        .iter()
        .copied()
        .find(|s| s.name() == name)
        .ok_or_else(|| FlowError::UnknownScheme(name.to_string()))
}

/// The stability-limited time step dt = σ (min H)² ds² / 2, with ds the
/// mean sample spacing. Errors with `DegenerateSpeed` when min H is at or
/// below `h_min_stop` (the speed 1/H is then unresolvable).
pub fn cfl_timestep(
    geom: &GeometrySamples,
    ds: f64,
    sigma: f64,
    h_min_stop: f64,
) -> Result<f64, FlowError> {
    let min_h = geom.min_h();
    if !min_h.is_finite() || min_h <= h_min_stop {
        return Err(FlowError::DegenerateSpeed { min_h, stop: h_min_stop });
    }
    Ok(0.5 * sigma * min_h * min_h * ds * ds)
}

/// The curve rescaled by e^{−t/n} (unit-area-growth gauge), in which the
/// flow converges to a round sphere.
pub fn rescaled_curve(curve: &GeneratingCurve, t: f64) -> GeneratingCurve {
    curve.scaled((-t / curve.n() as f64).exp())
}

/// Computes the monitor row for a state.
fn monitor_row(curve: &GeneratingCurve, geom: &GeometrySamples, t: f64) -> MonitorRow {
    let regions = geometry::decompose_regions(curve, geom);
    let m = curve.len();
    let min_u = (1..m - 1).map(|i| curve.r(i)).fold(f64::INFINITY, f64::min);
    let max_u = geom.u.iter().copied().fold(0.0, f64::max);
    let max_au = geom.u_tilde.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let (max_v_l, pratio_l) = match regions.bridge_closure() {
        None => (f64::NAN, f64::NAN),
        Some((lo, hi)) => {
            let vmax = (lo..=hi)
                .filter(|&i| geom.v_defined[i])
                .map(|i| geom.v[i])
                .fold(f64::NAN, f64::max);
            let pmin = geom.p[lo..=hi].iter().copied().fold(f64::INFINITY, f64::min);
            let pmax = geom.p[lo..=hi].iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let ratio = if pmin <= 0.0 { f64::INFINITY } else { pmax / pmin };
            (vmax, ratio)
        }
    };
    MonitorRow {
        t,
        min_h: geom.min_h(),
        max_h: geom.max_h(),
        min_u,
        max_u,
        max_au,
        max_v_l,
        pratio_l,
        area: geometry::area(curve),
        a: regions.a.unwrap_or(f64::NAN),
        b: regions.b.unwrap_or(f64::NAN),
        roundness: geometry::roundness(curve),
        star: geometry::star_center(curve, geom).is_some(),
        critcount: geometry::critical_point_count(geom),
    }
}

/// Integrates IMCF from `initial` to `config.t_end`, recording snapshots and
/// monitors at the snapshot cadence. Returns an error only for unusable
/// input or configuration; mathematical degeneration during the run is
/// recorded as the trajectory's [`TerminationReason`] instead.
pub fn run(config: &FlowConfig, initial: &GeneratingCurve) -> Result<Trajectory, FlowError> {
    if !(config.t_end.is_finite() && config.t_end > 0.0) {
        return Err(FlowError::InvalidConfig(format!(
            "t_end must be positive, got {}",
            config.t_end
        )));
    }
    if !(config.sigma > 0.0 && config.sigma <= 1.0) {
        return Err(FlowError::InvalidConfig(format!(
            "sigma must lie in (0, 1], got {}",
            config.sigma
        )));
    }
    if config.resample_every == 0 {
        return Err(FlowError::InvalidConfig("resample_every must be at least 1".into()));
    }
    if !(config.snapshot_dt.is_finite() && config.snapshot_dt > 0.0) {
        return Err(FlowError::InvalidConfig(format!(
            "snapshot_dt must be positive, got {}",
            config.snapshot_dt
        )));
    }
    let stepper = stepper_by_name(&config.scheme)?;

    let curve = if initial.len() == config.m && initial.spacing_deviation() <= tol::UNIFORMITY_REL
    {
        initial.clone()
    } else {
        initial.resample_uniform(config.m)?
    };
    let mut state = FlowState::new(curve)?;
    let n = state.curve.n();

    // Scale-aware stop thresholds from the initial surface.
    let scale = 0.5 * geometry::diameter(&state.curve);
    let h_min_stop = config.h_min_stop.unwrap_or(tol::H_MIN_STOP_COEFF / scale);
    let neck_radius_stop = config.neck_radius_stop.unwrap_or_else(|| {
        let regions = geometry::decompose_regions(&state.curve, &state.geom);
        let (lo, hi) = regions
            .bridge_interior()
            .unwrap_or((1, state.curve.len() - 2));
        let r_min = (lo..=hi).map(|i| state.curve.r(i)).fold(f64::INFINITY, f64::min);
        tol::NECK_STOP_FRACTION * r_min
    });

    // Initial state must itself be steppable.
    if state.geom.min_h() <= 0.0 {
        return Err(FlowError::InvalidConfig(format!(
            "initial surface is not mean-convex: min H = {:.6e}",
            state.geom.min_h()
        )));
    }

    let mut snapshots = Vec::new();
    let mut monitors = Vec::new();
    let t_tol = 1e-12 * config.t_end.max(1.0);

    // Snapshot recording doubles as the embeddedness sweep: a curve that
    // stopped being simple ends the run instead of being recorded.
    let record = |state: &FlowState,
                  snapshots: &mut Vec<Snapshot>,
                  monitors: &mut Vec<MonitorRow>|
     -> Option<TerminationReason> {
        if let Some((a, b)) = state.curve.find_self_intersection() {
            return Some(TerminationReason::InvariantBreach {
                t: state.t,
                detail: format!("curve self-intersects (segments {a} and {b})"),
            });
        }
        snapshots.push(Snapshot { t: state.t, curve: state.curve.clone() });
        monitors.push(monitor_row(&state.curve, &state.geom, state.t));
        None
    };

    let termination = 'run: {
        if let Some(reason) = record(&state, &mut snapshots, &mut monitors) {
            break 'run reason;
        }
        let mut k_snap: u64 = 1;
        loop {
            let next_snap = (k_snap as f64 * config.snapshot_dt).min(config.t_end);
            // Advance to the next snapshot time exactly.
            while next_snap - state.t > t_tol {
                let ds = state.curve.mean_spacing();
                let dt_cfl =
                    match cfl_timestep(&state.geom, ds, config.sigma, h_min_stop) {
                        Ok(dt) => dt,
                        Err(FlowError::DegenerateSpeed { min_h, .. }) => {
                            break 'run TerminationReason::DegenerateSpeed {
                                t: state.t,
                                min_h,
                            };
                        }
                        Err(e) => {
                            break 'run TerminationReason::InvariantBreach {
                                t: state.t,
                                detail: e.to_string(),
                            };
                        }
                    };
                let dt = dt_cfl.min(next_snap - state.t);
                match stepper.advance(&state.curve, &state.geom, dt) {
                    Ok(c) => state.curve = c,
                    Err(e) => {
                        break 'run TerminationReason::InvariantBreach {
                            t: state.t,
                            detail: e.to_string(),
                        };
                    }
                }
                state.t += dt;
                state.step += 1;
                match geometry::pointwise_geometry(&state.curve) {
                    Ok(g) => state.geom = g,
                    Err(e) => {
                        break 'run TerminationReason::InvariantBreach {
                            t: state.t,
                            detail: e.to_string(),
                        };
                    }
                }
                let r_min = (1..state.curve.len() - 1)
                    .map(|i| state.curve.r(i))
                    .fold(f64::INFINITY, f64::min);
                if r_min <= neck_radius_stop {
                    break 'run TerminationReason::NeckPinch { t: state.t, min_radius: r_min };
                }
                if state.step % config.resample_every as u64 == 0 {
                    match state.curve.resample_uniform(config.m) {
                        Ok(c) => state.curve = c,
                        Err(CurveError::Pinched { .. }) => {
                            break 'run TerminationReason::NeckPinch {
                                t: state.t,
                                min_radius: r_min,
                            };
                        }
                        Err(e) => {
                            break 'run TerminationReason::InvariantBreach {
                                t: state.t,
                                detail: e.to_string(),
                            };
                        }
                    }
                    match geometry::pointwise_geometry(&state.curve) {
                        Ok(g) => state.geom = g,
                        Err(e) => {
                            break 'run TerminationReason::InvariantBreach {
                                t: state.t,
                                detail: e.to_string(),
                            };
                        }
                    }
                }
            }
            state.t = next_snap;
            if let Some(reason) = record(&state, &mut snapshots, &mut monitors) {
                break 'run reason;
            }
            if config.t_end - state.t <= t_tol {
                break 'run TerminationReason::ReachedEnd;
            }
            k_snap += 1;
        }
    };

    Ok(Trajectory {
        n,
        config: config.clone(),
        snapshots,
        monitors,
        termination,
        steps_total: state.step,
    })
}
