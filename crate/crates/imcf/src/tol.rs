//! Centralized numerical tolerances and discretization policy constants.
//!
//! Every magic number used by validation, stepping, and the estimate checks
//! lives here with its rationale, so the trade-offs are auditable in one
//! place. Constants fall into three groups: *validity* (what counts as a
//! usable curve), *stepping policy* (CFL factor, resampling cadence), and
//! *check slacks* (how much discretization error a pass/fail verdict
//! absorbs). Check slacks are also runtime-overridable through
//! [`crate::verify::CheckTolerances`]; the values here are its defaults.

/// Relative deviation of chord lengths from their mean above which a curve is
/// rejected as non-uniformly sampled. Differencing stencils assume near-equal
/// spacing; 1% keeps their truncation error within its nominal order while
/// tolerating the slight drift the flow accumulates between reparametrizations.
pub const UNIFORMITY_REL: f64 = 0.01;

/// Curves shorter than this total length are degenerate: no meaningful
/// resampling or geometry is possible at f64 precision.
pub const DEGENERATE_LENGTH: f64 = 1e-12;

/// Minimum number of samples accepted by the resampler. Below this the
/// cubic interpolation stencils and the pole-ghost construction overlap.
pub const MIN_RESAMPLE_POINTS: usize = 16;

/// Minimum number of samples for a raw curve to be considered at all
/// (two poles plus enough interior points for one-sided stencils).
pub const MIN_CURVE_POINTS: usize = 5;

/// ⟨ν, ŵ⟩ at or below this threshold makes the graph gradient v = 1/⟨ν, ŵ⟩
/// numerically meaningless (v would exceed 10⁸), so v is flagged undefined
/// there rather than returned as a huge number.
pub const V_MIN_NU_W: f64 = 1e-8;

/// Number of samples adjacent to each pole at which v is always flagged
/// undefined: ⟨ν, ŵ⟩ → 0 at the poles by symmetry, so the quantity 1/⟨ν, ŵ⟩
/// measures nothing there.
pub const V_POLE_EXCLUSION: usize = 2;

/// Dead band on ⟨ν, e₁⟩ when counting sign changes (critical points of the
/// width function). Values within ±ε are treated as exact zeros so that a
/// flat plateau — e.g. the cylindrical section of the tube-with-caps initial
/// surface — contributes a single zero run instead of chatter.
pub const CRITICAL_DEADBAND: f64 = 1e-6;

/// Mirror-symmetry tolerance (per sample, absolute) for constructions that
/// promise a curve symmetric under x → −x.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Factor on the nominal spacing ds bounding the allowed jump of one-sided
/// second derivatives across piecewise-construction junctions. The pieces
/// are C² by design, so any jump is pure discretization noise of size O(ds).
pub const JUNCTION_C2_FACTOR: f64 = 10.0;

/// Default CFL safety factor σ in dt = σ · (min H)² · ds² / 2. One half is
/// the explicit-Euler stability edge for the parabolic operator H⁻²Δ on a
/// uniform grid; 0.4 of the edge keeps a margin for the first-order terms.
pub const DEFAULT_SIGMA: f64 = 0.4;

/// Steps between arc-length reparametrizations. Tangential drift of the
/// sample spacing grows slowly (the motion is purely normal), so every 20
/// steps keeps the spacing well inside [`UNIFORMITY_REL`] at negligible cost.
pub const DEFAULT_RESAMPLE_EVERY: usize = 20;

/// Default flow-time interval between recorded snapshots.
pub const DEFAULT_SNAPSHOT_DT: f64 = 0.05;

/// Default minimum-speed stop: when min H falls to this value divided by the
/// current length scale, 1/H ceases to be resolvable and the run terminates
/// with a `DegenerateSpeed` reason.
pub const H_MIN_STOP_COEFF: f64 = 1e-4;

/// Default neck-pinch stop: when the smallest interior radius falls below
/// this fraction of the initial smallest bridge radius, the surface is about
/// to leave the embedded rotationally-symmetric class and the run terminates.
pub const NECK_STOP_FRACTION: f64 = 1e-3;

/// Relative slack on the a-priori width/height/envelope bounds. The bounds
/// are saturated by exact solutions (a sphere meets the width bound with
/// equality), so a strict inequality would fail on roundoff alone; 10⁻³
/// relative absorbs time-integration bias at the default CFL factor.
pub const BOUND_SLACK_REL: f64 = 1e-3;

/// Relative slack on the boundary-speed lower bound, which is evaluated at
/// interpolated (not sampled) boundary abscissas and therefore carries an
/// extra O(ds) interpolation error.
pub const BOUNDARY_SPEED_SLACK_REL: f64 = 1e-2;

/// Per-step relative slack when checking that the bridge oscillation ratio
/// is nonincreasing in time: the ratio is a quotient of interpolated extrema
/// and may jitter at discretization scale between adjacent snapshots.
pub const MONOTONE_SLACK_REL: f64 = 1e-3;

/// Relative tolerance on exponential area growth |Ñ_t| = |Ñ_0| e^t.
pub const AREA_TOL_REL: f64 = 0.01;

/// Relative tolerance for the maximum-principle witness: an interior
/// extremum of e^{−t/(n−1)} u v is accepted if it lies within this relative
/// distance of the extremum over the reduced parabolic boundary.
pub const MAXPRIN_TOL_REL: f64 = 1e-3;

/// Relative slack (scaled by the current separation) when checking that the
/// distance between two flows is nondecreasing.
pub const AVOIDANCE_SLACK_REL: f64 = 1e-6;

/// Minimum acceptable convergence order for the evolution-equation residuals
/// under mesh doubling. The residuals are second-order consistent; 1.5
/// tolerates order degradation from the moving evaluation region.
pub const RESIDUAL_MIN_ORDER: f64 = 1.5;

/// Fraction of the sample range excluded at each end when measuring
/// evolution-equation residuals: pole stencils and the v-degeneracy there
/// would otherwise dominate the norm with non-PDE error.
pub const RESIDUAL_EDGE_FRACTION: f64 = 0.1;

/// Matching tolerance on flow times when pairing snapshots of two runs.
pub const SNAPSHOT_TIME_MATCH: f64 = 1e-9;

/// Default start of the smoothing-ramp interval (as a fraction of the
/// transition zone) in the tube-with-caps cutoff function. The cutoff is
/// identically 0 below this fraction, so the profile leaves the cylinder
/// exactly flat.
pub const TUBE_RAMP_START: f64 = 0.25;

/// Default end of the smoothing-ramp interval in the tube-with-caps cutoff.
/// Spreading the ramp over [0.25, 0.9] of the transition zone keeps the
/// cutoff's second derivative small enough that the surface stays mean-convex
/// down to tube radius c ≈ 0.55 for moderate neck lengths; narrower ramps
/// concentrate curvature and lose mean convexity.
pub const TUBE_RAMP_END: f64 = 0.9;
