//! Quantitative verification of the a-priori estimates over a trajectory.
//!
//! Each estimate the flow is expected to satisfy is implemented as a
//! [`Check`]: it consumes one (or two) recorded trajectories and produces a
//! [`CheckResult`] with a pass/fail verdict, the worst margin, and where the
//! worst case occurred. Checks are registered by name and can be run
//! selectively; together they form an [`EstimateReport`] whose exit code
//! distinguishes clean passes, failures, and checks that could not run.
//!
//! The checks (in registry order):
//!
//! | name               | statement verified                                        |
//! |--------------------|-----------------------------------------------------------|
//! | `width_bound`      | max |ũ| ≤ (max_{N₀} |F|) e^{t/n}                          |
//! | `height_bound`     | max u ≤ (max_{N₀} u) e^{t/(n−1)}                          |
//! | `boundary_speed`   | H ≥ (n−1) e^{−t/(n−1)} / max_{N₀} u at the bridge ends    |
//! | `rot_envelope`     | e^{−t/(n−1)} min_{L̄₀} p ≤ p ≤ e^{−t/(n−1)} max_{L̄₀} p    |
//! | `ratio_monotone`   | max_{L̄ₜ} p / min_{L̄ₜ} p nonincreasing in t               |
//! | `bridge_gradient`  | v < √n on the bridge                                      |
//! | `embeddedness`     | ⟨ν, ŵ⟩ > 0 on the interior (graph structure persists)     |
//! | `critical_count`   | # critical points of the width function nonincreasing     |
//! | `area_growth`      | |N_t| = |N₀| e^t                                          |
//! | `star_time`        | star-shaped by t* = n log(diam₀/R₀)                       |
//! | `avoidance`        | distance between nested flows nondecreasing               |
//! | `support_positive` | ⟨F, ν⟩ ± x₀ ⟨e₁, ν⟩ > 0 on the caps (support bound)       |
//! | `maxprin_witness`  | extrema of e^{−t/(n−1)} u v sit on the parabolic boundary |
//! | `residuals`        | discrete evolution-equation residuals converge at order ≥ 1.5 |
//! | `speed_monitor`    | (informational) sup of φ(v)/H and of 1/H over the run     |
//! | `cap_speed`        | (informational) sup of 1/H over the caps                  |
//!
//! The residual check discretizes the exact evolution equations satisfied
//! along the flow —
//!
//! ```text
//! (∂_t − H⁻²Δ) u    = 2pu/H − (n−1)p²v²u/H²
//! (∂_t − H⁻²Δ) v    = −|A|²v/H² + (n−1)p²v³/H² − 2|∇v|²/(H²v)
//! (∂_t − H⁻²Δ) H⁻¹  = |A|² H⁻¹ / H²
//! ```
//!
//! — by re-stepping each snapshot twice (a "probe") and forming centered
//! differences in time, so the recorded states are checked against the PDE
//! itself rather than against the integrator that produced them.

use crate::curve::GeneratingCurve;
use crate::flow::{self, Trajectory};
use crate::geometry::{self, GeometryError, GeometrySamples, RegionDecomposition};
use crate::tol;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

/// Failures preparing or running the check suite (as opposed to checks
/// failing their verdicts, which is reported inside the results).
#[derive(Debug, Error)]
pub enum VerifyError {
    /// A requested check name is not registered.
    #[error("unknown check '{name}' (available: {available})")]
    UnknownCheck {
        /// The name that failed to resolve.
        name: String,
        /// Comma-separated registered names.
        available: String,
    },

    /// The avoidance check was given an unusable pair of trajectories.
    #[error("avoidance precondition violated: {0}")]
    AvoidancePrecondition(String),

    /// A trajectory holds no snapshots at all.
    #[error("trajectory has no snapshots")]
    EmptyTrajectory,

    /// Geometry of a snapshot could not be evaluated.
    #[error(transparent)]
    Geometry(#[from] GeometryError),

    /// A residual probe could not be stepped.
    #[error("residual probe failed at t = {t}: {detail}")]
    ProbeFailed { t: f64, detail: String },
}

/// Outcome class of one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    /// The estimate held (within its documented slack).
    Pass,
    /// The estimate was violated.
    Fail,
    /// The check's inputs were insufficient (e.g. too few snapshots); it
    /// should have run but could not.
    Skipped,
    /// The check does not apply to this trajectory (e.g. bridge checks on a
    /// surface whose bridge is empty throughout).
    NotApplicable,
    /// Informational recording with no pass criterion.
    Info,
}

/// Result of one check over a trajectory.
#[derive(Debug, Clone)]
pub struct CheckResult {
    /// Registry name of the check.
    pub name: &'static str,
    /// Outcome class.
    pub status: CheckStatus,
    /// Worst margin of the verified inequality (positive = satisfied),
    /// in the check's natural units; `None` when no verdict applies.
    pub margin: Option<f64>,
    /// Flow time at which the worst margin occurred.
    pub t_worst: Option<f64>,
    /// Sample index at which the worst margin occurred.
    pub i_worst: Option<usize>,
    /// Human-readable elaboration (numbers, locations, why skipped).
    pub details: String,
}

impl CheckResult {
    /// Three-valued verdict: `Some(true)`/`Some(false)` for pass/fail,
    /// `None` when the check produced no verdict.
    pub fn pass(&self) -> Option<bool> {
        match self.status {
            CheckStatus::Pass => Some(true),
            CheckStatus::Fail => Some(false),
            _ => None,
        }
    }
}

/// Slack factors the verdicts absorb; see [`crate::tol`] for the rationale
/// behind each default.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct CheckTolerances {
    /// Relative slack on the width/height a-priori bounds.
    pub bound_rel: f64,
    /// Relative slack on the boundary-speed lower bound.
    pub boundary_speed_rel: f64,
    /// Relative slack on the rotational-curvature envelope.
    pub envelope_rel: f64,
    /// Per-step relative slack on ratio monotonicity.
    pub monotone_rel: f64,
    /// Relative tolerance on exponential area growth.
    pub area_rel: f64,
    /// Relative slack on avoidance-distance monotonicity.
    pub avoid_rel: f64,
    /// Relative tolerance for the maximum-principle witness.
    pub maxprin_rel: f64,
    /// Minimum acceptable residual convergence order.
    pub min_order: f64,
}

impl Default for CheckTolerances {
    fn default() -> Self {
        Self {
            bound_rel: tol::BOUND_SLACK_REL,
            boundary_speed_rel: tol::BOUNDARY_SPEED_SLACK_REL,
            envelope_rel: tol::BOUND_SLACK_REL,
            monotone_rel: tol::MONOTONE_SLACK_REL,
            area_rel: tol::AREA_TOL_REL,
            avoid_rel: tol::AVOIDANCE_SLACK_REL,
            maxprin_rel: tol::MAXPRIN_TOL_REL,
            min_order: tol::RESIDUAL_MIN_ORDER,
        }
    }
}

/// Precomputed per-snapshot analysis shared by all checks.
#[derive(Debug)]
pub struct SnapshotData {
    /// Flow time of the snapshot.
    pub t: f64,
    /// Pointwise geometry.
    pub geom: GeometrySamples,
    /// Cap/bridge decomposition.
    pub regions: RegionDecomposition,
    /// Hypersurface measure.
    pub area: f64,
    /// Critical points of the width function.
    pub crit_count: usize,
    /// Star-shapedness center and margin, if any.
    pub star: Option<(f64, f64)>,
}

/// Evaluates the shared per-snapshot analysis, in parallel when
/// `threads ≥ 2`.
pub fn analyze(traj: &Trajectory, threads: usize) -> Result<Vec<SnapshotData>, VerifyError> {
    if traj.snapshots.is_empty() {
        return Err(VerifyError::EmptyTrajectory);
    }
    let one = |snap: &flow::Snapshot| -> Result<SnapshotData, VerifyError> {
        let geom = geometry::pointwise_geometry(&snap.curve)?;
        let regions = geometry::decompose_regions(&snap.curve, &geom);
        let area = geometry::area(&snap.curve);
        let crit_count = geometry::critical_point_count(&geom);
        let star = geometry::star_center(&snap.curve, &geom);
        Ok(SnapshotData { t: snap.t, geom, regions, area, crit_count, star })
    };
    if threads < 2 || traj.snapshots.len() < 2 {
        return traj.snapshots.iter().map(one).collect();
    }
    let workers = threads.min(traj.snapshots.len());
    let mut out: Vec<Option<Result<SnapshotData, VerifyError>>> =
        (0..traj.snapshots.len()).map(|_| None).collect();
    let chunk = out.len().div_ceil(workers);
    std::thread::scope(|scope| {
        for (slice, snaps) in out
            .chunks_mut(chunk)
            .zip(traj.snapshots.chunks(chunk))
        {
            scope.spawn(move || {
                for (slot, snap) in slice.iter_mut().zip(snaps) {
                    *slot = Some(one(snap));
                }
            });
        }
    });
    out.into_iter().map(|r| r.expect("worker filled slot")).collect()
}

/// Everything a check may consult.
pub struct CheckContext<'a> {
    /// The trajectory under verification.
    pub traj: &'a Trajectory,
    /// Its per-snapshot analysis.
    pub snaps: &'a [SnapshotData],
    /// Enclosing trajectory for the avoidance check (this one inside it).
    pub outer: Option<(&'a Trajectory, &'a [SnapshotData])>,
    /// A refined (doubled-resolution) run of the same initial data, for
    /// residual convergence orders.
    pub refined: Option<(&'a Trajectory, &'a [SnapshotData])>,
    /// Slack factors.
    pub tols: &'a CheckTolerances,
}

/// One verifiable estimate, registered by name.
pub trait Check: Sync {
    /// Registry name (stable; used in reports and check selection).
    fn name(&self) -> &'static str;

    /// Evaluates the check. `Err` means the suite could not run (usage
    /// errors), not that the estimate failed.
    fn run(&self, cx: &CheckContext) -> Result<CheckResult, VerifyError>;
}

/// The full set of registered checks, in canonical report order.
pub fn registry() -> Vec<Box<dyn Check>> {
    vec![
        Box::new(WidthBound),
        Box::new(HeightBound),
        Box::new(BoundarySpeed),
        Box::new(RotEnvelope),
        Box::new(RatioMonotone),
        Box::new(BridgeGradient),
        Box::new(Embeddedness),
        Box::new(CriticalCount),
        Box::new(AreaGrowth),
        Box::new(StarTime),
        Box::new(Avoidance),
        Box::new(SupportPositive),
        Box::new(MaxPrinWitness),
        Box::new(Residuals),
        Box::new(SpeedMonitor),
        Box::new(CapSpeed),
    ]
}

/// Names of all registered checks, in canonical order.
pub fn registry_names() -> Vec<&'static str> {
    registry().iter().map(|c| c.name()).collect()
}

/// Runs the selected checks (all when `selected` is `None`), in parallel
/// when `threads ≥ 2`, and assembles the report in registry order.
pub fn run_checks(
    cx: &CheckContext,
    selected: Option<&[String]>,
    threads: usize,
) -> Result<EstimateReport, VerifyError> {
    let all = registry();
    let chosen: Vec<&dyn Check> = match selected {
        None => all.iter().map(|c| c.as_ref()).collect(),
        Some(names) => {
            for name in names {
                if !all.iter().any(|c| c.name() == name.as_str()) {
                    return Err(VerifyError::UnknownCheck {
                        name: name.clone(),
                        available: registry_names().join(", "),
                    });
                }
            }
            all.iter()
                .filter(|c| names.iter().any(|n| n == c.name()))
                .map(|c| c.as_ref())
                .collect()
        }
    };
    let results: Vec<Result<CheckResult, VerifyError>> = if threads < 2 || chosen.len() < 2 {
        chosen.iter().map(|c| c.run(cx)).collect()
    } else {
        let mut slots: Vec<Option<Result<CheckResult, VerifyError>>> =
            (0..chosen.len()).map(|_| None).collect();
        let workers = threads.min(chosen.len());
        let chunk = chosen.len().div_ceil(workers);
        std::thread::scope(|scope| {
            for (slot_chunk, check_chunk) in
                slots.chunks_mut(chunk).zip(chosen.chunks(chunk))
            {
                scope.spawn(move || {
                    for (slot, check) in slot_chunk.iter_mut().zip(check_chunk) {
                        *slot = Some(check.run(cx));
                    }
                });
            }
        });
        slots.into_iter().map(|r| r.expect("worker filled slot")).collect()
    };
    let mut out = Vec::with_capacity(results.len());
    for r in results {
        out.push(r?);
    }
    Ok(EstimateReport { results: out })
}

/// The assembled verdicts of a check run.
#[derive(Debug, Clone)]
pub struct EstimateReport {
    /// Check results in registry order.
    pub results: Vec<CheckResult>,
}

impl EstimateReport {
    /// The result with the given registry name, if it ran.
    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.results.iter().find(|r| r.name == name)
    }

    /// Process exit code policy: 2 if anything failed, else 3 if anything
    /// was skipped (inputs insufficient), else 0 (passes, informational
    /// entries, and not-applicable checks are all clean).
    pub fn exit_code(&self) -> i32 {
        if self.results.iter().any(|r| r.status == CheckStatus::Fail) {
            2
        } else if self.results.iter().any(|r| r.status == CheckStatus::Skipped) {
            3
        } else {
            0
        }
    }

    /// JSON object keyed by check name:
    /// `{name: {pass, margin, t_worst, i_worst, details, status}}`.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for r in &self.results {
            map.insert(
                r.name.to_string(),
                json!({
                    "pass": r.pass(),
                    "margin": r.margin,
                    "t_worst": r.t_worst,
                    "i_worst": r.i_worst,
                    "details": r.details,
                    "status": serde_json::to_value(r.status).expect("status serializes"),
                }),
            );
        }
        Value::Object(map)
    }

    /// One human-readable line per check.
    pub fn summary_lines(&self) -> Vec<String> {
        self.results
            .iter()
            .map(|r| {
                let status = serde_json::to_value(r.status)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default();
                match r.margin {
                    Some(m) => format!("{:<18} {:<15} margin {m:+.6e}", r.name, status),
                    None => format!("{:<18} {:<15}", r.name, status),
                }
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

fn skipped(name: &'static str, why: &str) -> CheckResult {
    CheckResult {
        name,
        status: CheckStatus::Skipped,
        margin: None,
        t_worst: None,
        i_worst: None,
        details: why.to_string(),
    }
}

fn not_applicable(name: &'static str, why: &str) -> CheckResult {
    CheckResult {
        name,
        status: CheckStatus::NotApplicable,
        margin: None,
        t_worst: None,
        i_worst: None,
        details: why.to_string(),
    }
}

/// Generic "observed ≤ bound(t)" sweep used by the width and height bounds:
/// `observe` returns (value, index) per snapshot, `bound` the ceiling at
/// that time. Passes when observed ≤ bound (1 + slack) at every snapshot.
fn sweep_upper_bound(
    name: &'static str,
    cx: &CheckContext,
    slack: f64,
    observe: impl Fn(&SnapshotData, &GeneratingCurve) -> (f64, usize),
    bound: impl Fn(f64) -> f64,
    describe: &str,
) -> CheckResult {
    if cx.snaps.len() < 2 {
        return skipped(name, "trajectory has fewer than 2 snapshots");
    }
    let mut worst = f64::INFINITY;
    let mut worst_t = 0.0;
    let mut worst_i = 0;
    let mut ok = true;
    for (snap, rec) in cx.snaps.iter().zip(&cx.traj.snapshots) {
        let (obs, idx) = observe(snap, &rec.curve);
        let b = bound(snap.t);
        if obs > b * (1.0 + slack) {
            ok = false;
        }
        let margin = b - obs;
        if margin < worst {
            worst = margin;
            worst_t = snap.t;
            worst_i = idx;
        }
    }
    CheckResult {
        name,
        status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
        margin: Some(worst),
        t_worst: Some(worst_t),
        i_worst: Some(worst_i),
        details: format!("{describe}; worst absolute margin {worst:+.6e} at t = {worst_t:.4}"),
    }
}

// ---------------------------------------------------------------------------
// The a-priori bounds
// ---------------------------------------------------------------------------

struct WidthBound;

impl Check for WidthBound {
    fn name(&self) -> &'static str {
        "width_bound"
    }

    fn run(&self, cx: &CheckContext) -> Result<CheckResult, VerifyError> {
        let n = cx.traj.n as f64;
        let c0 = cx.traj.snapshots[0].curve.max_point_norm();
        Ok(sweep_upper_bound(
            self.name(),
            cx,
            cx.tols.bound_rel,
            |snap, _| {
                let mut best = (0.0, 0);
                for (i, x) in snap.geom.u_tilde.iter().enumerate() {
                    if x.abs() > best.0 {
                        best = (x.abs(), i);
                    }
                }
                best
            },
            |t| c0 * (t / n).exp(),
            &format!("max |x| against (max_0 |F|) e^(t/n) with max_0 |F| = {c0:.6}"),
        ))
    }
}

struct HeightBound;

impl Check for HeightBound {
    fn name(&self) -> &'static str {
        "height_bound"
    }

    fn run(&self, cx: &CheckContext) -> Result<CheckResult, VerifyError> {
        let nm1 = (cx.traj.n - 1) as f64;
        let u0 = cx.snaps[0].geom.u.iter().copied().fold(0.0, f64::max);
        Ok(sweep_upper_bound(
            self.name(),
            cx,
            cx.tols.bound_rel,
            |snap, _| {
                let mut best = (0.0, 0);
                for (i, u) in snap.geom.u.iter().enumerate() {
                    if *u > best.0 {
                        best = (*u, i);
                    }
                }
                best
            },
            |t| u0 * (t / nm1).exp(),
            &format!("max u against (max_0 u) e^(t/(n-1)) with max_0 u = {u0:.6}"),
        ))
    }
}

struct BoundarySpeed;

impl Check for BoundarySpeed {
    fn name(&self) -> &'static str {
        "boundary_speed"
    }

    fn run(&self, cx: &CheckContext) -> Result<CheckResult, VerifyError> {
        let nm1 = (cx.traj.n - 1) as f64;
        let u0 = cx.snaps[0].geom.u.iter().copied().fold(0.0, f64::max);
        let mut worst = f64::INFINITY;
        let mut worst_t = 0.0;
        let mut worst_i = 0;
        let mut ok = true;
        let mut any = false;
        for snap in cx.snaps {
            let Some(a_seg) = snap.regions.a_seg else { continue };
            let Some(b_seg) = snap.regions.b_seg else { continue };
            any = true;
            let floor = nm1 * (-snap.t / nm1).exp() / u0;
            for seg in [a_seg, b_seg] {
                let h = RegionDecomposition::interp(&snap.geom.h, seg);
                if h < floor * (1.0 - cx.tols.boundary_speed_rel) {
                    ok = false;
                }
                let margin = h - floor;
                if margin < worst {
                    worst = margin;
                    worst_t = snap.t;
                    worst_i = seg.0;
                }
            }
        }
        if !any {
            return Ok(not_applicable(
                self.name(),
                "bridge empty at every snapshot; no free boundary to bound",
            ));
        }
        Ok(CheckResult {
            name: self.name(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            margin: Some(worst),
            t_worst: Some(worst_t),
            i_worst: Some(worst_i),
            details: format!(
                "H at the interpolated bridge ends against (n-1) e^(-t/(n-1)) / max_0 u; \
                 worst absolute margin {worst:+.6e} at t = {worst_t:.4}"
            ),
        })
    }
}

struct RotEnvelope;

impl Check for RotEnvelope {
    fn name(&self) -> &'static str {
        "rot_envelope"
    }

    fn run(&self, cx: &CheckContext) -> Result<CheckResult, VerifyError> {
        let nm1 = (cx.traj.n - 1) as f64;
        let Some((lo0, hi0)) = cx.snaps[0].regions.bridge_closure() else {
            return Ok(not_applicable(self.name(), "initial bridge is empty"));
        };
        let p0 = &cx.snaps[0].geom.p[lo0..=hi0];
        let p0min = p0.iter().copied().fold(f64::INFINITY, f64::min);
        let p0max = p0.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if p0min <= 0.0 {
            return Ok(not_applicable(
                self.name(),
                "rotational curvature is not positive on the initial bridge (hypothesis unmet)",
            ));
        }
        let slack = cx.tols.envelope_rel;
        let mut worst = f64::INFINITY;
        let mut worst_t = 0.0;
        let mut worst_i = 0;
        let mut ok = true;
        for snap in cx.snaps {
            let Some((lo, hi)) = snap.regions.bridge_interior() else { continue };
            let decay = (-snap.t / nm1).exp();
            let (env_lo, env_hi) = (decay * p0min, decay * p0max);
            for i in lo..=hi {
                let p = snap.geom.p[i];
                if p < env_lo * (1.0 - slack) || p > env_hi * (1.0 + slack) {
                    ok = false;
                }
                let margin = (p - env_lo).min(env_hi - p);
                if margin < worst {
                    worst = margin;
                    worst_t = snap.t;
                    worst_i = i;
                }
            }
        }
        Ok(CheckResult {
            name: self.name(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            margin: Some(worst),
            t_worst: Some(worst_t),
            i_worst: Some(worst_i),
            details: format!(
                "p on the bridge against [e^(-t/(n-1)) {p0min:.6}, e^(-t/(n-1)) {p0max:.6}]; \
                 worst absolute margin {worst:+.6e}"
            ),
        })
    }
}

/// Oscillation ratio of p over the closed bridge at one snapshot.
fn bridge_p_ratio(snap: &SnapshotData) -> Option<f64> {
    let (lo, hi) = snap.regions.bridge_closure()?;
    let ps = &snap.geom.p[lo..=hi];
    let pmin = ps.iter().copied().fold(f64::INFINITY, f64::min);
    let pmax = ps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Some(if pmin <= 0.0 { f64::INFINITY } else { pmax / pmin })
}

struct RatioMonotone;

impl Check for RatioMonotone {
    fn name(&self) -> &'static str {
        "ratio_monotone"
    }

    fn run(&self, cx: &CheckContext) -> Result<CheckResult, VerifyError> {
        let series: Vec<(f64, f64)> = cx
            .snaps
            .iter()
            .filter_map(|s| bridge_p_ratio(s).map(|r| (s.t, r)))
            .collect();
        if series.len() < 2 {
            return Ok(not_applicable(
                self.name(),
                "fewer than 2 snapshots with a nonempty bridge",
            ));
        }
        let mut worst = f64::INFINITY;
        let mut worst_t = series[0].0;
        let mut ok = true;
        for w in series.windows(2) {
            let ((_, r0), (t1, r1)) = (w[0], w[1]);
            if r1 > r0 * (1.0 + cx.tols.monotone_rel) {
                ok = false;
            }
            let drop = r0 - r1;
            if drop < worst {
                worst = drop;
                worst_t = t1;
            }
        }
        Ok(CheckResult {
            name: self.name(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            margin: Some(worst),
            t_worst: Some(worst_t),
            i_worst: None,
            details: format!(
                "bridge p-ratio from {:.6} to {:.6} over {} snapshots; \
                 smallest per-step drop {worst:+.3e}",
                series[0].1,
                series[series.len() - 1].1,
                series.len()
            ),
        })
    }
}

struct BridgeGradient;

impl Check for BridgeGradient {
    fn name(&self) -> &'static str {
        "bridge_gradient"
    }

    fn run(&self, cx: &CheckContext) -> Result<CheckResult, VerifyError> {
        let sqrt_n = (cx.traj.n as f64).sqrt();
        let mut vmax = f64::NEG_INFINITY;
        let mut worst_t = 0.0;
        let mut worst_i = 0;
        let mut any = false;
        for snap in cx.snaps {
            let Some((lo, hi)) = snap.regions.bridge_interior() else { continue };
            for i in lo..=hi {
                if snap.geom.v_defined[i] {
                    any = true;
                    if snap.geom.v[i] > vmax {
                        vmax = snap.geom.v[i];
                        worst_t = snap.t;
                        worst_i = i;
                    }
                }
            }
        }
        if !any {
            return Ok(not_applicable(
                self.name(),
                "no bridge samples with a defined gradient at any snapshot",
            ));
        }
        let margin = sqrt_n - vmax;
        if margin <= 0.0 {
            // The bound is guaranteed only for admissible initial data;
            // report a violation as such when the hypothesis is unmet.
            let admissible = crate::initial::check_admissible(&cx.traj.snapshots[0].curve)
                .map(|r| r.admissible)
                .unwrap_or(false);
            if !admissible {
                return Ok(CheckResult {
                    name: self.name(),
                    status: CheckStatus::NotApplicable,
                    margin: Some(margin),
                    t_worst: Some(worst_t),
                    i_worst: Some(worst_i),
                    details: format!(
                        "v reached {vmax:.6} ≥ √n = {sqrt_n:.6}, but the initial data are \
                         not admissible; the bound is reported, not asserted"
                    ),
                });
            }
        }
        Ok(CheckResult {
            name: self.name(),
            status: if margin > 0.0 { CheckStatus::Pass } else { CheckStatus::Fail },
            margin: Some(margin),
            t_worst: Some(worst_t),
            i_worst: Some(worst_i),
            details: format!("max bridge gradient v = {vmax:.6} against √n = {sqrt_n:.6}"),
        })
    }
}

struct Embeddedness;

impl Check for Embeddedness {
    fn name(&self) -> &'static str {
        "embeddedness"
    }

    fn run(&self, cx: &CheckContext) -> Result<CheckResult, VerifyError> {
        let mut worst = f64::INFINITY;
        let mut worst_t = 0.0;
        for snap in cx.snaps {
            let margin = snap.geom.min_interior_nu_w();
            if margin < worst {
                worst = margin;
                worst_t = snap.t;
            }
        }
        let i_worst = cx
            .snaps
            .iter()
            .find(|s| s.t == worst_t)
            .map(|s| {
                let nu = &s.geom.nu_w;
                (1..nu.len() - 1).min_by(|&a, &b| nu[a].total_cmp(&nu[b])).unwrap_or(0)
            });
        Ok(CheckResult {
            name: self.name(),
            status: if worst > 0.0 { CheckStatus::Pass } else { CheckStatus::Fail },
            margin: Some(worst),
            t_worst: Some(worst_t),
            i_worst,
            details: format!(
                "smallest interior ⟨ν, ŵ⟩ over the run = {worst:.6e} (graph structure persists \
                 while positive)"
            ),
        })
    }
}

struct CriticalCount;

impl Check for CriticalCount {
    fn name(&self) -> &'static str {
        "critical_count"
    }

    fn run(&self, cx: &CheckContext) -> Result<CheckResult, VerifyError> {
        if cx.snaps.len() < 2 {
            return Ok(skipped(self.name(), "trajectory has fewer than 2 snapshots"));
        }
        let counts: Vec<(f64, usize)> = cx.snaps.iter().map(|s| (s.t, s.crit_count)).collect();
        let mut worst = i64::MAX;
        let mut worst_t = counts[0].0;
        let mut ok = true;
        for w in counts.windows(2) {
            let drop = w[0].1 as i64 - w[1].1 as i64;
            if drop < 0 {
                ok = false;
            }
            if drop < worst {
                worst = drop;
                worst_t = w[1].0;
            }
        }
        Ok(CheckResult {
            name: self.name(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            margin: Some(worst as f64),
            t_worst: Some(worst_t),
            i_worst: None,
            details: format!(
                "critical points of the width function: {} initially, {} finally; \
                 nonincreasing = {ok}",
                counts[0].1,
                counts[counts.len() - 1].1
            ),
        })
    }
}

struct AreaGrowth;

impl Check for AreaGrowth {
    fn name(&self) -> &'static str {
        "area_growth"
    }

    fn run(&self, cx: &CheckContext) -> Result<CheckResult, VerifyError> {
        if cx.snaps.len() < 2 {
            return Ok(skipped(self.name(), "trajectory has fewer than 2 snapshots"));
        }
        let area0 = cx.snaps[0].area;
        let mut worst_err = 0.0;
        let mut worst_t = 0.0;
        for snap in cx.snaps {
            let rel = (snap.area / (area0 * snap.t.exp()) - 1.0).abs();
            if rel > worst_err {
                worst_err = rel;
                worst_t = snap.t;
            }
        }
        let margin = cx.tols.area_rel - worst_err;
        Ok(CheckResult {
            name: self.name(),
            status: if margin >= 0.0 { CheckStatus::Pass } else { CheckStatus::Fail },
            margin: Some(margin),
            t_worst: Some(worst_t),
            i_worst: None,
            details: format!(
                "area against |N_0| e^t: worst relative error {worst_err:.3e} \
                 (tolerance {:.3e})",
                cx.tols.area_rel
            ),
        })
    }
}

struct StarTime;

impl Check for StarTime {
    fn name(&self) -> &'static str {
        "star_time"
    }

    fn run(&self, cx: &CheckContext) -> Result<CheckResult, VerifyError> {
        let n = cx.traj.n as f64;
        let curve0 = &cx.traj.snapshots[0].curve;
        let diam = geometry::diameter(curve0);
        let (r_in, _) = geometry::inradius(curve0);
        let t_star = n * (diam / r_in).ln();
        let first = cx.snaps.iter().find(|s| s.star.is_some()).map(|s| s.t);
        let t_last = cx.snaps[cx.snaps.len() - 1].t;
        // Once past t*, star-shapedness must also persist.
        let regression = cx
            .snaps
            .iter()
            .find(|s| s.t >= t_star && s.star.is_none())
            .map(|s| s.t);
        let details_base = format!(
            "t* = n log(diam/R) = {t_star:.4} (diam = {diam:.4}, R = {r_in:.4})"
        );
        Ok(match (first, regression) {
            (Some(tf), None) if tf <= t_star => CheckResult {
                name: self.name(),
                status: CheckStatus::Pass,
                margin: Some(t_star - tf),
                t_worst: Some(tf),
                i_worst: None,
                details: format!("{details_base}; first star-shaped snapshot at t = {tf:.4}"),
            },
            (Some(tf), None) => CheckResult {
                // First witness after t* can only happen if the run started
                // non-star and crossed late — a failure of the bound.
                name: self.name(),
                status: CheckStatus::Fail,
                margin: Some(t_star - tf),
                t_worst: Some(tf),
                i_worst: None,
                details: format!(
                    "{details_base}; star-shapedness first appeared late, at t = {tf:.4}"
                ),
            },
            (None, _) if t_last < t_star => CheckResult {
                name: self.name(),
                status: CheckStatus::Skipped,
                margin: None,
                t_worst: None,
                i_worst: None,
                details: format!(
                    "{details_base}; run ended at t = {t_last:.4} before t*, never star-shaped"
                ),
            },
            (_, Some(tr)) => CheckResult {
                name: self.name(),
                status: CheckStatus::Fail,
                margin: Some(t_star - tr),
                t_worst: Some(tr),
                i_worst: None,
                details: format!("{details_base}; not star-shaped at t = {tr:.4} ≥ t*"),
            },
            (None, None) => CheckResult {
                name: self.name(),
                status: CheckStatus::Fail,
                margin: Some(t_star - t_last),
                t_worst: Some(t_last),
                i_worst: None,
                details: format!(
                    "{details_base}; never star-shaped though the run reached t = {t_last:.4}"
                ),
            },
        })
    }
}

struct Avoidance;

impl Check for Avoidance {
    fn name(&self) -> &'static str {
        "avoidance"
    }

    fn run(&self, cx: &CheckContext) -> Result<CheckResult, VerifyError> {
        let Some((outer_traj, _)) = cx.outer else {
            return Ok(not_applicable(
                self.name(),
                "no enclosing trajectory supplied (pass a second run to compare)",
            ));
        };
        let inner0 = &cx.traj.snapshots[0].curve;
        let outer0 = &outer_traj.snapshots[0].curve;
        if !geometry::strictly_contained(inner0, outer0) {
            return Err(VerifyError::AvoidancePrecondition(
                "the first trajectory's initial surface is not strictly inside the second's"
                    .to_string(),
            ));
        }
        let pairs = cx.traj.snapshots.len().min(outer_traj.snapshots.len());
        if pairs < 2 {
            return Ok(skipped(self.name(), "fewer than 2 paired snapshots"));
        }
        let mut dist = Vec::with_capacity(pairs);
        for k in 0..pairs {
            let (si, so) = (&cx.traj.snapshots[k], &outer_traj.snapshots[k]);
            if (si.t - so.t).abs() > tol::SNAPSHOT_TIME_MATCH {
                return Err(VerifyError::AvoidancePrecondition(format!(
                    "snapshot times diverge at index {k}: {} vs {}",
                    si.t, so.t
                )));
            }
            dist.push((si.t, geometry::curve_distance(&si.curve, &so.curve)));
        }
        let mut worst = f64::INFINITY;
        let mut worst_t = dist[0].0;
        let mut ok = true;
        for w in dist.windows(2) {
            let ((_, d0), (t1, d1)) = (w[0], w[1]);
            if d1 < d0 * (1.0 - cx.tols.avoid_rel) {
                ok = false;
            }
            let gain = d1 - d0;
            if gain < worst {
                worst = gain;
                worst_t = t1;
            }
        }
        Ok(CheckResult {
            name: self.name(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            margin: Some(worst),
            t_worst: Some(worst_t),
            i_worst: None,
            details: format!(
                "separation from {:.6} to {:.6} over {pairs} paired snapshots; \
                 smallest per-step gain {worst:+.3e}",
                dist[0].1,
                dist[pairs - 1].1
            ),
        })
    }
}

struct SupportPositive;

impl Check for SupportPositive {
    fn name(&self) -> &'static str {
        "support_positive"
    }

    fn run(&self, cx: &CheckContext) -> Result<CheckResult, VerifyError> {
        let n = cx.traj.n as f64;
        let t_end = cx.snaps[cx.snaps.len() - 1].t;
        let x0_mag = cx.traj.snapshots[0].curve.max_point_norm() * (t_end / n).exp();
        let mut worst = f64::INFINITY;
        let mut worst_t = 0.0;
        let mut worst_i = 0;
        for (snap, rec) in cx.snaps.iter().zip(&cx.traj.snapshots) {
            let mut eval = |range: (usize, usize), sign: f64| {
                for i in range.0..=range.1 {
                    let f_nu = rec.curve.x(i) * snap.geom.nu_e1[i]
                        + rec.curve.r(i) * snap.geom.nu_w[i];
                    let theta = f_nu + sign * x0_mag * snap.geom.nu_e1[i];
                    if theta < worst {
                        worst = theta;
                        worst_t = snap.t;
                        worst_i = i;
                    }
                }
            };
            eval(snap.regions.cap_plus(), 1.0);
            eval(snap.regions.cap_minus(), -1.0);
        }
        Ok(CheckResult {
            name: self.name(),
            status: if worst > 0.0 { CheckStatus::Pass } else { CheckStatus::Fail },
            margin: Some(worst),
            t_worst: Some(worst_t),
            i_worst: Some(worst_i),
            details: format!(
                "min over caps of ⟨F, ν⟩ ± x₀⟨e₁, ν⟩ with x₀ = {x0_mag:.6} \
                 (caps stay on the far side of the shifted support point)"
            ),
        })
    }
}

struct MaxPrinWitness;

impl Check for MaxPrinWitness {
    fn name(&self) -> &'static str {
        "maxprin_witness"
    }

    fn run(&self, cx: &CheckContext) -> Result<CheckResult, VerifyError> {
        let nm1 = (cx.traj.n - 1) as f64;
        // Extrema of f = e^{-t/(n-1)} u v over the space-time bridge, versus
        // extrema over the reduced parabolic boundary (t = 0, or within 2
        // samples of the moving bridge ends).
        struct Extremum {
            value: f64,
            t: f64,
            i: usize,
            on_boundary: bool,
        }
        let mut sup: Option<Extremum> = None;
        let mut inf: Option<Extremum> = None;
        let mut sup_b = f64::NEG_INFINITY;
        let mut inf_b = f64::INFINITY;
        let mut any = false;
        for (k, snap) in cx.snaps.iter().enumerate() {
            let Some((lo, hi)) = snap.regions.bridge_closure() else { continue };
            for i in lo..=hi {
                if !snap.geom.v_defined[i] {
                    continue;
                }
                any = true;
                let f = (-snap.t / nm1).exp() * snap.geom.u[i] * snap.geom.v[i];
                let on_boundary = k == 0 || i <= lo + 2 || i + 2 >= hi;
                if on_boundary {
                    sup_b = sup_b.max(f);
                    inf_b = inf_b.min(f);
                }
                if sup.as_ref().is_none_or(|e| f > e.value) {
                    sup = Some(Extremum { value: f, t: snap.t, i, on_boundary });
                }
                if inf.as_ref().is_none_or(|e| f < e.value) {
                    inf = Some(Extremum { value: f, t: snap.t, i, on_boundary });
                }
            }
        }
        if !any {
            return Ok(not_applicable(
                self.name(),
                "no bridge samples with a defined gradient at any snapshot",
            ));
        }
        let (sup, inf) = (sup.expect("nonempty"), inf.expect("nonempty"));
        let tol_rel = cx.tols.maxprin_rel;
        let sup_ok = sup.on_boundary || sup.value <= sup_b * (1.0 + tol_rel);
        let inf_ok = inf.on_boundary || inf.value >= inf_b * (1.0 - tol_rel);
        // Margins normalized by the boundary extrema: positive = interior
        // extremum within tolerance of (or dominated by) the boundary's.
        let sup_margin = (sup_b * (1.0 + tol_rel) - sup.value) / sup_b.abs().max(1e-300);
        let inf_margin = (inf.value - inf_b * (1.0 - tol_rel)) / inf_b.abs().max(1e-300);
        let (margin, worst) = if sup_margin <= inf_margin {
            (sup_margin, &sup)
        } else {
            (inf_margin, &inf)
        };
        Ok(CheckResult {
            name: self.name(),
            status: if sup_ok && inf_ok { CheckStatus::Pass } else { CheckStatus::Fail },
            margin: Some(margin),
            t_worst: Some(worst.t),
            i_worst: Some(worst.i),
            details: format!(
                "e^(-t/(n-1)) u v: sup {s:.6} at (t = {st:.4}, i = {si}, boundary = {sb}), \
                 inf {f:.6} at (t = {ft:.4}, i = {fi}, boundary = {fb}); \
                 boundary extrema [{ib:.6}, {bb:.6}]",
                s = sup.value,
                st = sup.t,
                si = sup.i,
                sb = sup.on_boundary,
                f = inf.value,
                ft = inf.t,
                fi = inf.i,
                fb = inf.on_boundary,
                ib = inf_b,
                bb = sup_b,
            ),
        })
    }
}

// ---------------------------------------------------------------------------
// Evolution-equation residuals
// ---------------------------------------------------------------------------

/// Max-norm residuals of the three exact evolution equations over a
/// trajectory (maximum over snapshots of the per-snapshot max over the
/// trimmed sample range).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResidualNorms {
    /// Residual of the height equation for u.
    pub r_u: f64,
    /// Residual of the gradient equation for v.
    pub r_v: f64,
    /// Residual of the speed equation for H⁻¹.
    pub r_h_inv: f64,
}

/// Nonuniform centered first difference in time at the middle of three
/// states separated by dt0 and dt1.
fn dt_center(f0: f64, f1: f64, f2: f64, dt0: f64, dt1: f64) -> f64 {
    (dt0 * dt0 * f2 - dt1 * dt1 * f0 + (dt1 * dt1 - dt0 * dt0) * f1)
        / (dt0 * dt1 * (dt0 + dt1))
}

/// Measures the evolution-equation residuals by probing each snapshot: two
/// fresh CFL-limited steps give three time levels, the PDE terms are
/// evaluated at the middle one, and ∂_t by the centered difference. The
/// outermost 10% of samples at each end are excluded (pole stencils; v is
/// undefined there).
///
/// The first snapshot — the supplied initial datum — is excluded whenever
/// a later one exists: the equations hold classically only for t > 0.
/// Constructed initial surfaces are typically C² with third-derivative
/// jumps (e.g. at cutoff-ramp junctions), where Δ H⁻¹ exists only as a
/// distribution and a pointwise residual is meaningless; one instant of
/// flow mollifies this away.
pub fn evolution_residuals(
    traj: &Trajectory,
    snaps: &[SnapshotData],
) -> Result<ResidualNorms, VerifyError> {
    let stepper = flow::stepper_by_name(&traj.config.scheme)
        .unwrap_or_else(|_| flow::stepper_by_name("euler").expect("euler is registered"));
    let sigma = traj.config.sigma;
    let n = traj.n as f64;
    let mut norms = ResidualNorms { r_u: 0.0, r_v: 0.0, r_h_inv: 0.0 };

    let skip_initial = usize::from(traj.snapshots.len() > 1);
    for (rec, snap) in traj.snapshots.iter().zip(snaps).skip(skip_initial) {
        let c0 = &rec.curve;
        let g0 = &snap.geom;
        let probe = || -> Result<_, VerifyError> {
            let fail = |e: &dyn std::fmt::Display| VerifyError::ProbeFailed {
                t: snap.t,
                detail: e.to_string(),
            };
            let ds0 = c0.mean_spacing();
            let dt0 = 0.5 * sigma * g0.min_h() * g0.min_h() * ds0 * ds0;
            let c1 = stepper.advance(c0, g0, dt0).map_err(|e| fail(&e))?;
            let g1 = geometry::pointwise_geometry(&c1).map_err(|e| fail(&e))?;
            let ds1 = c1.mean_spacing();
            let dt1 = 0.5 * sigma * g1.min_h() * g1.min_h() * ds1 * ds1;
            let c2 = stepper.advance(&c1, &g1, dt1).map_err(|e| fail(&e))?;
            let g2 = geometry::pointwise_geometry(&c2).map_err(|e| fail(&e))?;
            Ok((dt0, c1, g1, dt1, g2))
        };
        let (dt0, c1, g1, dt1, g2) = probe()?;

        let m = c1.len();
        let lo = ((m - 1) as f64 * tol::RESIDUAL_EDGE_FRACTION).ceil() as usize;
        let hi = ((m - 1) as f64 * (1.0 - tol::RESIDUAL_EDGE_FRACTION)).floor() as usize;
        let s1 = c1.cumulative_lengths();

        let lap_u = geometry::surface_laplacian(&c1, &g1.u)?;
        let lap_v = geometry::surface_laplacian(&c1, &g1.v)?;
        let h_inv0: Vec<f64> = g0.h.iter().map(|h| 1.0 / h).collect();
        let h_inv1: Vec<f64> = g1.h.iter().map(|h| 1.0 / h).collect();
        let h_inv2: Vec<f64> = g2.h.iter().map(|h| 1.0 / h).collect();
        let lap_h_inv = geometry::surface_laplacian(&c1, &h_inv1)?;

        for i in lo..=hi {
            let (h, p, a2) = (g1.h[i], g1.p[i], g1.a2[i]);
            let h2 = h * h;
            // u-equation.
            if g1.v_defined[i] && g0.v_defined[i] && g2.v_defined[i] {
                let du = dt_center(g0.u[i], g1.u[i], g2.u[i], dt0, dt1);
                let v = g1.v[i];
                let rhs = 2.0 * p * g1.u[i] / h - (n - 1.0) * p * p * v * v * g1.u[i] / h2;
                let res = (du - lap_u[i] / h2 - rhs).abs();
                norms.r_u = norms.r_u.max(res);
                // v-equation (needs the gradient defined on the stencil too).
                if g1.v_defined[i - 1] && g1.v_defined[i + 1] {
                    let dv = dt_center(g0.v[i], g1.v[i], g2.v[i], dt0, dt1);
                    let grad_v = (g1.v[i + 1] - g1.v[i - 1]) / (s1[i + 1] - s1[i - 1]);
                    let rhs_v = -a2 * v / h2 + (n - 1.0) * p * p * v * v * v / h2
                        - 2.0 * grad_v * grad_v / (h2 * v);
                    let res_v = (dv - lap_v[i] / h2 - rhs_v).abs();
                    norms.r_v = norms.r_v.max(res_v);
                }
            }
            // speed equation.
            let dh_inv = dt_center(h_inv0[i], h_inv1[i], h_inv2[i], dt0, dt1);
            let res_h = (dh_inv - lap_h_inv[i] / h2 - a2 * h_inv1[i] / h2).abs();
            norms.r_h_inv = norms.r_h_inv.max(res_h);
        }
    }
    Ok(norms)
}

struct Residuals;

impl Check for Residuals {
    fn name(&self) -> &'static str {
        "residuals"
    }

    fn run(&self, cx: &CheckContext) -> Result<CheckResult, VerifyError> {
        let coarse = evolution_residuals(cx.traj, cx.snaps)?;
        let Some((fine_traj, _)) = cx.refined else {
            return Ok(CheckResult {
                name: self.name(),
                status: CheckStatus::Info,
                margin: None,
                t_worst: None,
                i_worst: None,
                details: format!(
                    "residual max-norms: u {:.3e}, v {:.3e}, 1/H {:.3e}; supply a refined \
                     run to measure convergence order",
                    coarse.r_u, coarse.r_v, coarse.r_h_inv
                ),
            });
        };
        // Restrict both runs to their common snapshot times so the norms
        // are comparable.
        let common =
            |a: &Trajectory, b: &Trajectory| -> Vec<usize> {
                a.snapshots
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| {
                        b.snapshots
                            .iter()
                            .any(|o| (o.t - s.t).abs() <= tol::SNAPSHOT_TIME_MATCH)
                    })
                    .map(|(k, _)| k)
                    .collect()
            };
        let kc = common(cx.traj, fine_traj);
        let kf = common(fine_traj, cx.traj);
        if kc.is_empty() || kf.is_empty() {
            return Ok(skipped(self.name(), "the two runs share no snapshot times"));
        }
        let restrict = |traj: &Trajectory, keep: &[usize]| Trajectory {
            snapshots: keep.iter().map(|&k| traj.snapshots[k].clone()).collect(),
            ..traj.clone()
        };
        let sub_c = restrict(cx.traj, &kc);
        let sub_f = restrict(fine_traj, &kf);
        let rc = {
            let s = analyze(&sub_c, 1)?;
            evolution_residuals(&sub_c, &s)?
        };
        let rf = {
            let s = analyze(&sub_f, 1)?;
            evolution_residuals(&sub_f, &s)?
        };
        let order = |c: f64, f: f64| (c / f).log2();
        let orders = [
            ("u", order(rc.r_u, rf.r_u)),
            ("v", order(rc.r_v, rf.r_v)),
            ("1/H", order(rc.r_h_inv, rf.r_h_inv)),
        ];
        let min_order = orders.iter().map(|(_, o)| *o).fold(f64::INFINITY, f64::min);
        let ok = min_order >= cx.tols.min_order && min_order.is_finite();
        Ok(CheckResult {
            name: self.name(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            margin: Some(min_order - cx.tols.min_order),
            t_worst: None,
            i_worst: None,
            details: format!(
                "orders under refinement: u {:.2}, v {:.2}, 1/H {:.2} \
                 (coarse norms u {:.3e}, v {:.3e}, 1/H {:.3e}; fine u {:.3e}, v {:.3e}, 1/H {:.3e})",
                orders[0].1, orders[1].1, orders[2].1,
                rc.r_u, rc.r_v, rc.r_h_inv,
                rf.r_u, rf.r_v, rf.r_h_inv,
            ),
        })
    }
}

// ---------------------------------------------------------------------------
// Informational monitors
// ---------------------------------------------------------------------------

struct SpeedMonitor;

impl Check for SpeedMonitor {
    fn name(&self) -> &'static str {
        "speed_monitor"
    }

    fn run(&self, cx: &CheckContext) -> Result<CheckResult, VerifyError> {
        let sqrt_n = (cx.traj.n as f64).sqrt();
        let mut sup_g = f64::NEG_INFINITY;
        let mut sup_h_inv = f64::NEG_INFINITY;
        let mut last_lambda = f64::NAN;
        for snap in cx.snaps {
            sup_h_inv = snap
                .geom
                .h
                .iter()
                .map(|h| 1.0 / h)
                .fold(sup_h_inv, f64::max);
            let Some((lo, hi)) = snap.regions.bridge_closure() else { continue };
            let vmax = (lo..=hi)
                .filter(|&i| snap.geom.v_defined[i])
                .map(|i| snap.geom.v[i])
                .fold(f64::NEG_INFINITY, f64::max);
            if !(vmax.is_finite() && vmax < sqrt_n) {
                continue;
            }
            let lambda = 0.5 * (1.0 / sqrt_n + 1.0 / vmax);
            last_lambda = lambda;
            for i in lo..=hi {
                if snap.geom.v_defined[i] {
                    let g = snap.geom.v[i] / ((1.0 - lambda * snap.geom.v[i]) * snap.geom.h[i]);
                    sup_g = sup_g.max(g);
                }
            }
        }
        Ok(CheckResult {
            name: self.name(),
            status: CheckStatus::Info,
            margin: None,
            t_worst: None,
            i_worst: None,
            details: format!(
                "sup over the run of 1/H = {:.6}; sup over bridges of φ(v)/H = {} \
                 (φ(v) = v/(1−λv), last λ = {:.6}); recorded, no threshold asserted",
                sup_h_inv,
                if sup_g.is_finite() { format!("{sup_g:.6}") } else { "n/a (bridge empty)".into() },
                last_lambda,
            ),
        })
    }
}

struct CapSpeed;

impl Check for CapSpeed {
    fn name(&self) -> &'static str {
        "cap_speed"
    }

    fn run(&self, cx: &CheckContext) -> Result<CheckResult, VerifyError> {
        let mut sup = f64::NEG_INFINITY;
        let mut sup_t = 0.0;
        let mut last = f64::NAN;
        for snap in cx.snaps {
            let mut local = f64::NEG_INFINITY;
            for range in [snap.regions.cap_plus(), snap.regions.cap_minus()] {
                for i in range.0..=range.1 {
                    local = local.max(1.0 / snap.geom.h[i]);
                }
            }
            if local > sup {
                sup = local;
                sup_t = snap.t;
            }
            last = local;
        }
        Ok(CheckResult {
            name: self.name(),
            status: CheckStatus::Info,
            margin: None,
            t_worst: Some(sup_t),
            i_worst: None,
            details: format!(
                "sup over caps of 1/H = {sup:.6} (attained at t = {sup_t:.4}); \
                 final-snapshot value {last:.6}; recorded, no threshold asserted"
            ),
        })
    }
}
