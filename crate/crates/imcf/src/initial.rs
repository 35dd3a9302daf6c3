//! Initial-data constructors and the admissibility gate.
//!
//! Three constructors produce valid generating curves:
//!
//! - [`make_sphere`]: a round sphere, sampled exactly uniformly in angle;
//! - [`make_graph_surface`]: a positive graph y(x) over an axis interval,
//!   closed off at each end by an axis-centered circular cap that matches
//!   the profile tangentially (so the revolved surface has smooth poles);
//! - [`make_tube_spheres`]: two unit spheres centered at ±(ℓ+1) joined by a
//!   long cylinder of radius c ∈ (½, 1), with a C² interpolant between the
//!   cylinder and each sphere. For moderate c this surface is mean-convex
//!   and admissible but **not** star-shaped about any center — the
//!   motivating example for flowing non-star-shaped initial data.
//!
//! The interpolant on the right transition zone [(ℓ+1)c, ℓ+1] is
//! f = φ̃ · h̃ + c, where h̃ splices the tangent line T of the oscillation
//! profile h(x) = ℓ⁻⁴cos(ℓ²(x−(ℓ+1))) − ℓ⁻⁴ + (1−c) at
//! x₀ = (ℓ+1) − π/(2ℓ²) (so h̃ is C², h̃(ℓ+1) = 1−c, h̃″(ℓ+1) = −1), and
//! φ̃ is a quintic-smoothstep cutoff vanishing identically near the
//! cylinder. The cutoff's ramp interval is a parameter: concentrating the
//! ramp makes φ̃″ large and destroys mean convexity, so the default ramp
//! spans [0.25, 0.9] of the zone.
//!
//! [`check_admissible`] evaluates the admissibility gate: the oscillation
//! ratio of the rotational curvature p over the closed bridge must stay
//! below n^{n/(2(n−1))}, the surface must be mean-convex, and the bridge
//! must be graphical (⟨ν, ŵ⟩ > 0 off the poles).

use crate::curve::{CurveError, GeneratingCurve};
use crate::geometry::{self, GeometryError};
use crate::tol;
use serde::Serialize;
use thiserror::Error;

/// Failures constructing or gating initial data.
#[derive(Debug, Error)]
pub enum InitialDataError {
    /// A scalar parameter is out of its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The supplied graph profile is unusable (too short, non-increasing
    /// abscissas, non-finite or non-positive heights).
    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    /// The assembled surface fails to be a graph over the axis interval.
    #[error("surface is not a graph over the axis: ⟨ν, ŵ⟩ = {value:.3e} at sample {index}")]
    NotAGraph { index: usize, value: f64 },

    /// The tube construction violated one of its own guarantees for these
    /// parameters (pre-validated inequality, junction smoothness, or mean
    /// convexity of the sampled surface).
    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    /// The resulting polyline violated a curve invariant.
    #[error(transparent)]
    Curve(#[from] CurveError),

    /// Geometry of the assembled curve could not be evaluated.
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Builds a round n-sphere of radius `radius` centered at (`center_x`, 0),
/// sampled exactly uniformly: ρ_j = (center_x + R cos θ_j, R sin θ_j) with
/// θ_j = πj/(m−1); the pole radii are pinned to exactly 0.
pub fn make_sphere(
    n: usize,
    radius: f64,
    center_x: f64,
    m: usize,
) -> Result<GeneratingCurve, InitialDataError> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(InitialDataError::InvalidParameter(format!(
            "sphere radius must be positive and finite, got {radius}"
        )));
    }
    if !center_x.is_finite() {
        return Err(InitialDataError::InvalidParameter(format!(
            "sphere center must be finite, got {center_x}"
        )));
    }
    if m < tol::MIN_RESAMPLE_POINTS {
        return Err(InitialDataError::InvalidParameter(format!(
            "need at least {} samples, got {m}",
            tol::MIN_RESAMPLE_POINTS
        )));
    }
    let mut points = Vec::with_capacity(m);
    for j in 0..m {
        let theta = std::f64::consts::PI * j as f64 / (m - 1) as f64;
        points.push([center_x + radius * theta.cos(), radius * theta.sin()]);
    }
    points[0] = [center_x + radius, 0.0];
    points[m - 1] = [center_x - radius, 0.0];
    Ok(GeneratingCurve::new(n, points)?)
}

/// Circumcenter of three points, or `None` when they are (nearly) collinear.
fn circumcenter(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> Option<[f64; 2]> {
    let d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    let scale = (b[0] - a[0]).hypot(b[1] - a[1]) * (c[0] - b[0]).hypot(c[1] - b[1]);
    if d.abs() < 1e-12 * scale.max(1e-300) {
        return None;
    }
    let a2 = a[0] * a[0] + a[1] * a[1];
    let b2 = b[0] * b[0] + b[1] * b[1];
    let c2 = c[0] * c[0] + c[1] * c[1];
    Some([
        (a2 * (b[1] - c[1]) + b2 * (c[1] - a[1]) + c2 * (a[1] - b[1])) / d,
        (a2 * (c[0] - b[0]) + b2 * (a[0] - c[0]) + c2 * (b[0] - a[0])) / d,
    ])
}

/// Slope dy/dx of the profile at an end sample, estimated from the
/// circumcircle of the three outermost samples (tangent to the circle at
/// the end point — exact when the data lie on a circle, second-order
/// otherwise). Falls back to the end secant for collinear data.
fn end_slope(p0: [f64; 2], p1: [f64; 2], p2: [f64; 2]) -> f64 {
    // p0 is the end sample; p1, p2 its inward neighbors.
    match circumcenter(p0, p1, p2) {
        Some(o) if (p0[1] - o[1]).abs() > 1e-300 => -(p0[0] - o[0]) / (p0[1] - o[1]),
        _ => (p0[1] - p1[1]) / (p0[0] - p1[0]),
    }
}

/// Closes a positive graph profile into a full generating curve with an
/// axis-centered circular cap at each end and resamples it uniformly.
///
/// The cap at the right end attaches at the last sample (x_R, y_R) with
/// slope m_R: its center (x_R + m_R y_R, 0) is the intersection of the
/// profile normal with the axis, its radius y_R √(1+m_R²) reaches the
/// attachment point, and it meets the axis perpendicularly — the revolved
/// cap is a smooth polar cap. An end sample with y = 0 is used as the pole
/// directly. The assembled surface must be a graph over the axis on its
/// interior (⟨ν, ŵ⟩ > 0), or [`InitialDataError::NotAGraph`] is returned.
pub fn make_graph_surface(
    n: usize,
    xs: &[f64],
    ys: &[f64],
    m: usize,
) -> Result<GeneratingCurve, InitialDataError> {
    if xs.len() != ys.len() {
        return Err(InitialDataError::InvalidProfile(format!(
            "{} abscissas but {} heights",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 4 {
        return Err(InitialDataError::InvalidProfile(format!(
            "need at least 4 profile samples, got {}",
            xs.len()
        )));
    }
    let k = xs.len() - 1;
    for (i, (&x, &y)) in xs.iter().zip(ys).enumerate() {
        if !x.is_finite() || !y.is_finite() {
            return Err(InitialDataError::InvalidProfile(format!(
                "non-finite sample ({x}, {y}) at index {i}"
            )));
        }
        let interior = i > 0 && i < k;
        if (interior && y <= 0.0) || y < 0.0 {
            return Err(InitialDataError::InvalidProfile(format!(
                "heights must be positive over the interior, got y[{i}] = {y}"
            )));
        }
    }
    for (i, w) in xs.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(InitialDataError::InvalidProfile(format!(
                "abscissas must be strictly increasing, violated at index {i}"
            )));
        }
    }

    let ds_in: f64 = {
        let len: f64 = xs
            .windows(2)
            .zip(ys.windows(2))
            .map(|(xw, yw)| (xw[1] - xw[0]).hypot(yw[1] - yw[0]))
            .sum();
        len / k as f64
    };

    // Assemble left-to-right, then reverse into curve order (right pole first).
    let mut pts: Vec<[f64; 2]> = Vec::new();
    let push = |p: [f64; 2], pts: &mut Vec<[f64; 2]>| {
        if pts.last() != Some(&p) {
            pts.push(p);
        }
    };

    if ys[0] > 0.0 {
        let p0 = [xs[0], ys[0]];
        let slope = end_slope(p0, [xs[1], ys[1]], [xs[2], ys[2]]);
        let cx = xs[0] + slope * ys[0];
        let radius = ys[0] * (1.0 + slope * slope).sqrt();
        let alpha = ys[0].atan2(xs[0] - cx);
        let steps = ((radius * (std::f64::consts::PI - alpha) / ds_in).ceil() as usize).max(16);
        push([cx - radius, 0.0], &mut pts);
        for j in 1..=steps {
            let theta = std::f64::consts::PI
                + (alpha - std::f64::consts::PI) * j as f64 / steps as f64;
            push([cx + radius * theta.cos(), radius * theta.sin()], &mut pts);
        }
    } else {
        push([xs[0], 0.0], &mut pts);
    }
    for (&x, &y) in xs.iter().zip(ys).skip(1).take(k.saturating_sub(1)) {
        push([x, y], &mut pts);
    }
    if ys[k] > 0.0 {
        let p0 = [xs[k], ys[k]];
        let slope = end_slope(p0, [xs[k - 1], ys[k - 1]], [xs[k - 2], ys[k - 2]]);
        let cx = xs[k] + slope * ys[k];
        let radius = ys[k] * (1.0 + slope * slope).sqrt();
        let alpha = ys[k].atan2(xs[k] - cx);
        let steps = ((radius * alpha / ds_in).ceil() as usize).max(16);
        push(p0, &mut pts);
        for j in 1..steps {
            let theta = alpha * (1.0 - j as f64 / steps as f64);
            push([cx + radius * theta.cos(), radius * theta.sin()], &mut pts);
        }
        push([cx + radius, 0.0], &mut pts);
    } else {
        push([xs[k], 0.0], &mut pts);
    }

    pts.reverse();
    let curve = GeneratingCurve::new(n, pts)?.resample_uniform(m)?;
    let geom = geometry::pointwise_geometry(&curve)?;
    for i in 1..curve.len() - 1 {
        if geom.nu_w[i] <= 0.0 {
            return Err(InitialDataError::NotAGraph { index: i, value: geom.nu_w[i] });
        }
    }
    // The resampler skips the O(M²) sweep; run it once on the final curve.
    if let Some((a, b)) = curve.find_self_intersection() {
        return Err(CurveError::SelfIntersection { seg_a: a, seg_b: b }.into());
    }
    Ok(curve)
}

/// Parameters of the tube-with-spherical-caps initial surface.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TubeSpheresParams {
    /// Half-length parameter ℓ ≥ 4: spheres sit at ±(ℓ+1), the cylinder
    /// spans |x| ≤ (ℓ+1)c.
    pub ell: f64,
    /// Cylinder radius c ∈ (½, 1).
    pub c: f64,
    /// Output sample count.
    pub m: usize,
    /// Start of the cutoff ramp as a fraction of the transition zone.
    pub ramp_start: f64,
    /// End of the cutoff ramp as a fraction of the transition zone.
    pub ramp_end: f64,
}

impl TubeSpheresParams {
    /// Parameters with the default ramp interval.
    pub fn new(ell: f64, c: f64, m: usize) -> Self {
        Self { ell, c, m, ramp_start: tol::TUBE_RAMP_START, ramp_end: tol::TUBE_RAMP_END }
    }
}

/// Analytic right-half profile y(x) of the tube-with-caps surface,
/// exposing the piecewise structure for direct evaluation and testing.
#[derive(Debug, Clone)]
pub struct TubeProfile {
    params: TubeSpheresParams,
    /// Right end of the cylinder, x₁ = (ℓ+1)c.
    x_tube_end: f64,
    /// Splice abscissa x₀ = (ℓ+1) − π/(2ℓ²) where h̃ switches from the
    /// tangent line to the oscillation profile.
    x_split: f64,
    /// Sphere center abscissa, x₂ = ℓ+1.
    x_center: f64,
}

impl TubeProfile {
    /// Validates the parameters and the pre-inequality T((ℓ+1)c) ≥ 0 that
    /// keeps the spliced profile h̃ nonnegative (hence c ≤ f ≤ 1).
    pub fn new(params: TubeSpheresParams) -> Result<Self, InitialDataError> {
        let TubeSpheresParams { ell, c, m, ramp_start, ramp_end } = params;
        if !(ell.is_finite() && ell >= 4.0) {
            return Err(InitialDataError::InvalidParameter(format!(
                "tube length ell must be at least 4, got {ell}"
            )));
        }
        if !(c.is_finite() && c > 0.5 && c < 1.0) {
            return Err(InitialDataError::InvalidParameter(format!(
                "tube radius c must lie in (1/2, 1), got {c}"
            )));
        }
        if m < tol::MIN_RESAMPLE_POINTS {
            return Err(InitialDataError::InvalidParameter(format!(
                "need at least {} samples, got {m}",
                tol::MIN_RESAMPLE_POINTS
            )));
        }
        if !(0.0..1.0).contains(&ramp_start) || !(ramp_end > ramp_start && ramp_end <= 1.0) {
            return Err(InitialDataError::InvalidParameter(format!(
                "cutoff ramp must satisfy 0 ≤ start < end ≤ 1, got [{ramp_start}, {ramp_end}]"
            )));
        }
        if 1.0 - c < ell.powi(-4) {
            return Err(InitialDataError::ConstructionFailed(format!(
                "oscillation amplitude ℓ⁻⁴ = {:.3e} exceeds the gap 1 − c = {:.3e}",
                ell.powi(-4),
                1.0 - c
            )));
        }
        let profile = Self {
            params,
            x_tube_end: (ell + 1.0) * c,
            x_split: (ell + 1.0) - std::f64::consts::FRAC_PI_2 / (ell * ell),
            x_center: ell + 1.0,
        };
        let t_at_tube = profile.spliced(profile.x_tube_end);
        if t_at_tube < 0.0 {
            return Err(InitialDataError::ConstructionFailed(format!(
                "tangent line dips below zero at the cylinder: T((ℓ+1)c) = {t_at_tube:.6e}; \
                 the transition zone is too short for these parameters"
            )));
        }
        Ok(profile)
    }

    /// Right end of the cylinder, x₁ = (ℓ+1)c.
    pub fn x_tube_end(&self) -> f64 {
        self.x_tube_end
    }

    /// Splice abscissa x₀ between tangent line and oscillation profile.
    pub fn x_split(&self) -> f64 {
        self.x_split
    }

    /// Sphere center abscissa x₂ = ℓ+1 (also the top of the transition).
    pub fn x_center(&self) -> f64 {
        self.x_center
    }

    /// Right pole abscissa ℓ+2.
    pub fn x_pole(&self) -> f64 {
        self.x_center + 1.0
    }

    /// Oscillation profile h(x) = ℓ⁻⁴ cos(ℓ²(x − (ℓ+1))) − ℓ⁻⁴ + (1−c).
    fn oscillation(&self, x: f64) -> f64 {
        let l2 = self.params.ell * self.params.ell;
        let l4 = l2 * l2;
        (l2 * (x - self.x_center)).cos() / l4 - 1.0 / l4 + (1.0 - self.params.c)
    }

    /// The spliced profile h̃: tangent line of h at x₀ for x ≤ x₀ (where h
    /// has h″(x₀) = 0, so the splice is C²), h itself beyond.
    fn spliced(&self, x: f64) -> f64 {
        if x >= self.x_split {
            self.oscillation(x)
        } else {
            let l2 = self.params.ell * self.params.ell;
            let l4 = l2 * l2;
            (x - self.x_split) / l2 + (1.0 - self.params.c) - 1.0 / l4
        }
    }

    /// Quintic-smoothstep cutoff φ̃ over the transition zone: identically 0
    /// below the ramp, identically 1 above it, C² throughout.
    fn cutoff(&self, x: f64) -> f64 {
        let zone = self.x_center - self.x_tube_end;
        let s = (x - self.x_tube_end) / zone;
        let tau = (s - self.params.ramp_start) / (self.params.ramp_end - self.params.ramp_start);
        if tau <= 0.0 {
            0.0
        } else if tau >= 1.0 {
            1.0
        } else {
            tau * tau * tau * (10.0 + tau * (6.0 * tau - 15.0))
        }
    }

    /// Transition interpolant f = φ̃ · h̃ + c on [(ℓ+1)c, ℓ+1]:
    /// f((ℓ+1)c) = c flat to second order, f(ℓ+1) = 1 with f′ = 0, f″ = −1.
    pub fn transition(&self, x: f64) -> f64 {
        self.cutoff(x) * self.spliced(x) + self.params.c
    }

    /// Full profile y(|x|): cylinder radius c, then the transition, then the
    /// unit-sphere cap √(1 − (|x| − (ℓ+1))²) out to the pole at |x| = ℓ+2.
    pub fn y(&self, x: f64) -> f64 {
        let ax = x.abs();
        if ax <= self.x_tube_end {
            self.params.c
        } else if ax <= self.x_center {
            self.transition(ax)
        } else {
            let d = ax - self.x_center;
            (1.0 - d * d).max(0.0).sqrt()
        }
    }
}

/// Cubic Lagrange evaluation of a polyline (points `pts`, knot parameters
/// `s`) at parameter `tau`, with caller-supplied ghost extension `ext` for
/// stencil indices off either end. `seg` carries the search hint.
fn lagrange_eval(
    pts: &[[f64; 2]],
    s: &[f64],
    tau: f64,
    seg: &mut usize,
    ext: impl Fn(isize) -> ([f64; 2], f64),
) -> [f64; 2] {
    let m = pts.len();
    while *seg + 2 < m && s[*seg + 1] < tau {
        *seg += 1;
    }
    let mut x = 0.0;
    let mut r = 0.0;
    let mut nodes = [([0.0f64; 2], 0.0f64); 4];
    for (a, node) in nodes.iter_mut().enumerate() {
        let i = *seg as isize - 1 + a as isize;
        *node = if i < 0 || i >= m as isize {
            ext(i)
        } else {
            (pts[i as usize], s[i as usize])
        };
    }
    for a in 0..4 {
        let mut w = 1.0;
        for b in 0..4 {
            if a != b {
                w *= (tau - nodes[b].1) / (nodes[a].1 - nodes[b].1);
            }
        }
        x += w * nodes[a].0[0];
        r += w * nodes[a].0[1];
    }
    [x, r]
}

/// Builds the tube-with-caps surface in R^{n+1}: two unit spheres at ±(ℓ+1)
/// joined by a cylinder of radius c with C² transitions, sampled uniformly
/// in arc length with exact mirror symmetry (the left half is the bitwise
/// mirror of the right half). Verifies after assembly that the junctions
/// are C² at the sampling resolution and that the surface is mean-convex;
/// either failure is a [`InitialDataError::ConstructionFailed`].
pub fn make_tube_spheres(
    n: usize,
    params: TubeSpheresParams,
) -> Result<GeneratingCurve, InitialDataError> {
    let profile = TubeProfile::new(params)?;
    let m = params.m;

    // Dense right half, pole (ℓ+2, 0) → equator (0, c): the spherical cap
    // parametrized by angle (uniform in arc length through the pole), the
    // transition and cylinder by abscissa, with the junctions as knots.
    let dense = 16 * m.max(256);
    let quarter = std::f64::consts::FRAC_PI_2;
    let zone = profile.x_center - profile.x_tube_end;
    let l_est = quarter + 1.1 * zone + profile.x_tube_end;
    let mut pts: Vec<[f64; 2]> = Vec::new();
    let n_cap = ((dense as f64 * quarter / l_est).ceil() as usize).max(64);
    for j in 0..=n_cap {
        let theta = quarter * j as f64 / n_cap as f64;
        pts.push([profile.x_center + theta.cos(), theta.sin()]);
    }
    let n_zone = ((dense as f64 * 1.1 * zone / l_est).ceil() as usize).max(64);
    for j in 1..=n_zone {
        let x = profile.x_center - zone * j as f64 / n_zone as f64;
        pts.push([x, profile.transition(x)]);
    }
    let n_tube = ((dense as f64 * profile.x_tube_end / l_est).ceil() as usize).max(64);
    for j in 1..=n_tube {
        let x = profile.x_tube_end * (1.0 - j as f64 / n_tube as f64);
        pts.push([x, params.c]);
    }
    pts[0] = [profile.x_pole(), 0.0];
    let last = pts.len() - 1;
    pts[last] = [0.0, params.c];

    // Arc-length table of the half; full length by symmetry.
    let mut s = Vec::with_capacity(pts.len());
    s.push(0.0);
    let mut acc = 0.0;
    for w in pts.windows(2) {
        acc += (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]);
        s.push(acc);
    }
    let l_half = acc;
    let l_total = 2.0 * l_half;

    // Ghost extension: reflect across the pole below parameter 0, continue
    // across the symmetry plane x = 0 beyond the half length.
    let ext = |i: isize| -> ([f64; 2], f64) {
        if i < 0 {
            let j = (-i) as usize;
            ([pts[j][0], -pts[j][1]], -s[j])
        } else {
            let j = 2 * (pts.len() - 1) - i as usize;
            ([-pts[j][0], pts[j][1]], 2.0 * l_half - s[j])
        }
    };

    // Evaluate only the right half and mirror it: the output is symmetric
    // under x → −x bit for bit. (For odd m the middle sample is its own
    // mirror; its |x| is at roundoff scale.)
    let mut out = vec![[0.0f64; 2]; m];
    let mut seg = 0usize;
    for j in 0..=(m - 1) / 2 {
        let tau = l_total * j as f64 / (m - 1) as f64;
        let p = if j == 0 {
            pts[0]
        } else {
            lagrange_eval(&pts, &s, tau, &mut seg, ext)
        };
        out[j] = p;
        out[m - 1 - j] = [-p[0], p[1]];
    }
    out[0] = [profile.x_pole(), 0.0];
    out[m - 1] = [-profile.x_pole(), 0.0];
    let curve = GeneratingCurve::new(n, out)?;

    // C² junctions: one-sided O(δ²) second derivatives of the analytic
    // profile must agree across each junction to within O(ds). δ resolves
    // the oscillation scale ℓ⁻² and stays inside the adjacent pieces.
    let ds = curve.mean_spacing();
    let delta = (ds / 4.0).min(0.1 / (params.ell * params.ell));
    let second = |x0: f64, dir: f64| -> f64 {
        let f = |j: f64| profile.y(x0 + dir * j * delta);
        (2.0 * f(0.0) - 5.0 * f(1.0) + 4.0 * f(2.0) - f(3.0)) / (delta * delta)
    };
    for xj in [profile.x_tube_end, profile.x_split, profile.x_center] {
        let jump = (second(xj, 1.0) - second(xj, -1.0)).abs();
        if jump > tol::JUNCTION_C2_FACTOR * ds {
            return Err(InitialDataError::ConstructionFailed(format!(
                "profile is not C² at x = {xj:.6}: second-derivative jump {jump:.3e} \
                 exceeds {:.3e}",
                tol::JUNCTION_C2_FACTOR * ds
            )));
        }
    }

    // Mean convexity of the sampled surface — the binding constraint on
    // (ℓ, c, ramp): a too-narrow cutoff ramp or too-deep neck loses H > 0.
    let geom = geometry::pointwise_geometry(&curve)?;
    let (mut min_h, mut argmin) = (f64::INFINITY, 0);
    for (i, &h) in geom.h.iter().enumerate() {
        if h < min_h {
            min_h = h;
            argmin = i;
        }
    }
    if min_h <= 0.0 {
        return Err(InitialDataError::ConstructionFailed(format!(
            "surface is not mean-convex: min H = {min_h:.6} at sample {argmin} \
             (x = {:.4}); widen the cutoff ramp, shorten the tube, or increase c",
            curve.x(argmin)
        )));
    }
    Ok(curve)
}

/// Admissibility report for an initial surface.
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    /// Hypersurface dimension n.
    pub n: usize,
    /// Oscillation ratio max p / min p over the closed bridge (1 when the
    /// bridge is empty, ∞ when p is not positive there).
    pub ratio: f64,
    /// Admissibility threshold n^{n/(2(n−1))}.
    pub threshold: f64,
    /// Smallest mean curvature over the surface.
    pub min_h: f64,
    /// Smallest interior ⟨ν, ŵ⟩ (graph margin of the surface off the poles).
    pub embeddedness_margin: f64,
    /// Whether the bridge is empty (the sign of ⟨ν, e₁⟩ changes only once).
    pub bridge_empty: bool,
    /// Whether some axis center sees the surface star-shaped.
    pub star_shaped: bool,
    /// The combined gate: ratio < threshold, min H > 0, margin > 0.
    pub admissible: bool,
}

/// Evaluates the admissibility gate on an initial surface.
pub fn check_admissible(curve: &GeneratingCurve) -> Result<AdmissibilityReport, InitialDataError> {
    let n = curve.n();
    let geom = geometry::pointwise_geometry(curve)?;
    let regions = geometry::decompose_regions(curve, &geom);
    let ratio = match regions.bridge_closure() {
        None => 1.0,
        Some((lo, hi)) => {
            let ps = &geom.p[lo..=hi];
            let pmin = ps.iter().copied().fold(f64::INFINITY, f64::min);
            let pmax = ps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if pmin <= 0.0 {
                f64::INFINITY
            } else {
                pmax / pmin
            }
        }
    };
    let nf = n as f64;
    let threshold = nf.powf(nf / (2.0 * (nf - 1.0)));
    let min_h = geom.min_h();
    let margin = geom.min_interior_nu_w();
    let star = geometry::star_center(curve, &geom).is_some();
    Ok(AdmissibilityReport {
        n,
        ratio,
        threshold,
        min_h,
        embeddedness_margin: margin,
        bridge_empty: regions.bridge_is_empty(),
        star_shaped: star,
        admissible: ratio < threshold && min_h > 0.0 && margin > 0.0,
    })
}
