//! Discrete geometry of the generating curve.
//!
//! With the curve ρ(s) = (x, r) parametrized counterclockwise by arc length,
//! the revolved hypersurface N ⊂ R^{n+1} has, at the sample ρ_i:
//!
//! - unit tangent T = ρ′, outward unit normal ν = (T_r, −T_x);
//! - profile principal curvature k = x′r″ − r′x″ (signed curvature of the
//!   plane curve; +1 on a counterclockwise unit circle);
//! - rotational principal curvature p = ⟨ν, ŵ⟩ / u (multiplicity n−1),
//!   where u = r is the height and ŵ the unit vector from the axis;
//!   at the poles p = k by the smooth-limit rule;
//! - mean curvature H = k + (n−1) p and |A|² = k² + (n−1) p²;
//! - graph gradient v = 1/⟨ν, ŵ⟩ (= √(1+y′²) where the surface is a graph
//!   over the axis), flagged undefined near the poles and wherever
//!   ⟨ν, ŵ⟩ is not safely positive.
//!
//! Discretization: the tangent is the normalized central chord, the profile
//! curvature is the circumradius (Menger) curvature of three consecutive
//! samples — exact on circles, so spheres evaluate to machine precision,
//! poles included (via ghost reflection (x, r) → (x, −r) across the axis).
//!
//! The module also hosts the axisymmetric Laplace–Beltrami operator
//! Δf = f″ + (n−1)(r′/r) f′ (with Δf = n f″ at the poles), the cap/bridge
//! region decomposition driven by the sign of ⟨ν, e₁⟩, and the global
//! measurements used by the checks: area, diameter, inradius,
//! star-shapedness, curve distance, roundness, and region containment.

use crate::curve::GeneratingCurve;
use crate::tol;
use thiserror::Error;

/// Failures of the geometry evaluators.
#[derive(Debug, Error)]
pub enum GeometryError {
    /// Sample spacing drifted past the tolerance the stencils assume.
    #[error("curve sampling is non-uniform: max chord deviation {deviation:.3e} exceeds {limit:.3e}")]
    NonUniform { deviation: f64, limit: f64 },

    /// A scalar field's length does not match the curve's sample count.
    #[error("field has {got} samples but the curve has {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Pointwise geometric data of a generating curve; all vectors have one
/// entry per curve sample.
#[derive(Debug, Clone)]
pub struct GeometrySamples {
    /// Unit tangent T (normalized central chord).
    pub tangent: Vec<[f64; 2]>,
    /// Outward unit normal ν = (T_r, −T_x).
    pub normal: Vec<[f64; 2]>,
    /// Profile principal curvature k.
    pub k: Vec<f64>,
    /// Rotational principal curvature p (p = k at the poles).
    pub p: Vec<f64>,
    /// Mean curvature H = k + (n−1) p.
    pub h: Vec<f64>,
    /// Squared second fundamental form |A|² = k² + (n−1) p².
    pub a2: Vec<f64>,
    /// Height u = r of the sample above the axis.
    pub u: Vec<f64>,
    /// Width ũ = x of the sample along the axis.
    pub u_tilde: Vec<f64>,
    /// Graph gradient v = 1/⟨ν, ŵ⟩; NaN where `v_defined` is false.
    pub v: Vec<f64>,
    /// Whether v is meaningful at the sample (away from poles, ⟨ν, ŵ⟩ > 0).
    pub v_defined: Vec<bool>,
    /// ⟨ν, e₁⟩, the axis component of the normal.
    pub nu_e1: Vec<f64>,
    /// ⟨ν, ŵ⟩, the radial component of the normal.
    pub nu_w: Vec<f64>,
}

impl GeometrySamples {
    /// Smallest mean curvature over all samples.
    pub fn min_h(&self) -> f64 {
        self.h.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest mean curvature over all samples.
    pub fn max_h(&self) -> f64 {
        self.h.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Smallest ⟨ν, ŵ⟩ over interior samples — the embeddedness margin of
    /// the graph structure (poles excluded, where ⟨ν, ŵ⟩ = 0 by symmetry).
    pub fn min_interior_nu_w(&self) -> f64 {
        self.nu_w[1..self.nu_w.len() - 1]
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Computes all pointwise geometric data.
///
/// Precondition: the spacing must be uniform within [`tol::UNIFORMITY_REL`]
/// (the flow reparametrizes periodically to maintain this).
pub fn pointwise_geometry(curve: &GeneratingCurve) -> Result<GeometrySamples, GeometryError> {
    let deviation = curve.spacing_deviation();
    if deviation > tol::UNIFORMITY_REL {
        return Err(GeometryError::NonUniform { deviation, limit: tol::UNIFORMITY_REL });
    }
    let m = curve.len();
    let nm1 = (curve.n() - 1) as f64;

    let mut g = GeometrySamples {
        tangent: Vec::with_capacity(m),
        normal: Vec::with_capacity(m),
        k: Vec::with_capacity(m),
        p: Vec::with_capacity(m),
        h: Vec::with_capacity(m),
        a2: Vec::with_capacity(m),
        u: Vec::with_capacity(m),
        u_tilde: Vec::with_capacity(m),
        v: Vec::with_capacity(m),
        v_defined: Vec::with_capacity(m),
        nu_e1: Vec::with_capacity(m),
        nu_w: Vec::with_capacity(m),
    };

    for i in 0..m {
        let a = curve.ghost(i as isize - 1);
        let b = curve.ghost(i as isize);
        let c = curve.ghost(i as isize + 1);

        let chord = [c[0] - a[0], c[1] - a[1]];
        let norm = (chord[0] * chord[0] + chord[1] * chord[1]).sqrt();
        let t = [chord[0] / norm, chord[1] / norm];
        let nu = [t[1], -t[0]];

        // Menger curvature of (a, b, c): 2·cross / product of side lengths.
        // Exact (= 1/R) whenever the three samples lie on a circle.
        let ab = [b[0] - a[0], b[1] - a[1]];
        let bc = [c[0] - b[0], c[1] - b[1]];
        let cross = ab[0] * bc[1] - ab[1] * bc[0];
        let lab = (ab[0] * ab[0] + ab[1] * ab[1]).sqrt();
        let lbc = (bc[0] * bc[0] + bc[1] * bc[1]).sqrt();
        let k = 2.0 * cross / (lab * lbc * norm);

        let pole = i == 0 || i == m - 1;
        let p = if pole { k } else { nu[1] / b[1] };

        let near_pole = i < tol::V_POLE_EXCLUSION || i >= m - tol::V_POLE_EXCLUSION;
        let v_ok = !near_pole && nu[1] > tol::V_MIN_NU_W;

        g.tangent.push(t);
        g.normal.push(nu);
        g.k.push(k);
        g.p.push(p);
        g.h.push(k + nm1 * p);
        g.a2.push(k * k + nm1 * p * p);
        g.u.push(b[1]);
        g.u_tilde.push(b[0]);
        g.v.push(if v_ok { 1.0 / nu[1] } else { f64::NAN });
        g.v_defined.push(v_ok);
        g.nu_e1.push(nu[0]);
        g.nu_w.push(nu[1]);
    }
    Ok(g)
}

/// Applies the Laplace–Beltrami operator of the revolved hypersurface to an
/// axisymmetric scalar sampled on the curve:
///
/// ```text
/// Δf = f″ + (n−1) (r′/r) f′        (arc-length derivatives)
/// Δf = n f″                        (at the poles)
/// ```
///
/// Interior derivatives use spacing-aware three-point stencils (robust to
/// the slight drift between reparametrizations); the pole stencil reflects
/// f evenly across the axis, which is the smooth-limit behaviour of any
/// axisymmetric scalar.
pub fn surface_laplacian(curve: &GeneratingCurve, f: &[f64]) -> Result<Vec<f64>, GeometryError> {
    let m = curve.len();
    if f.len() != m {
        return Err(GeometryError::LengthMismatch { expected: m, got: f.len() });
    }
    let deviation = curve.spacing_deviation();
    if deviation > tol::UNIFORMITY_REL {
        return Err(GeometryError::NonUniform { deviation, limit: tol::UNIFORMITY_REL });
    }
    let s = curve.cumulative_lengths();
    let n = curve.n() as f64;
    let mut out = Vec::with_capacity(m);

    for i in 0..m {
        if i == 0 || i == m - 1 {
            // Even reflection: f(−s) = f(s), so f′(0) = 0 and
            // f″(0) = 2 (f₁ − f₀)/h². The radial term (n−1)(r′/r)f′ tends to
            // (n−1) f″, giving Δf = n f″ at the pole.
            let (j, h) = if i == 0 { (1, s[1]) } else { (m - 2, s[m - 1] - s[m - 2]) };
            let fpp = 2.0 * (f[j] - f[i]) / (h * h);
            out.push(n * fpp);
            continue;
        }
        let hm = s[i] - s[i - 1];
        let hp = s[i + 1] - s[i];
        let fpp = 2.0 * (hm * f[i + 1] - (hm + hp) * f[i] + hp * f[i - 1]) / (hm * hp * (hm + hp));
        let fp = (f[i + 1] - f[i - 1]) / (hm + hp);
        let rp = (curve.r(i + 1) - curve.r(i - 1)) / (hm + hp);
        out.push(fpp + (n - 1.0) * (rp / curve.r(i)) * fp);
    }
    Ok(out)
}

/// Decomposition of the curve into the right cap C⁺ (normal not pointing
/// backwards: ⟨ν, e₁⟩ ≥ 0), the left cap C⁻ (⟨ν, e₁⟩ ≤ 0), and the bridge
/// L between them. The caps are the maximal contiguous runs containing the
/// poles; samples with ⟨ν, e₁⟩ = 0 tie-break into the caps, so the bridge
/// is empty exactly when the two runs meet.
#[derive(Debug, Clone)]
pub struct RegionDecomposition {
    /// Sample count of the decomposed curve.
    pub m: usize,
    /// Last index of C⁺ (the run starts at index 0).
    pub cap_plus_end: usize,
    /// First index of C⁻ (the run ends at index M−1).
    pub cap_minus_start: usize,
    /// Left bridge-boundary abscissa a (interpolated zero of ⟨ν, e₁⟩);
    /// `None` when the bridge is empty.
    pub a: Option<f64>,
    /// Right bridge-boundary abscissa b; `None` when the bridge is empty.
    pub b: Option<f64>,
    /// Segment index and weight locating a: the boundary sits at fraction
    /// w ∈ [0, 1] along segment (i, i+1).
    pub a_seg: Option<(usize, f64)>,
    /// Segment index and weight locating b.
    pub b_seg: Option<(usize, f64)>,
}

impl RegionDecomposition {
    /// Inclusive index range of the bridge interior, `None` when empty.
    pub fn bridge_interior(&self) -> Option<(usize, usize)> {
        if self.cap_minus_start > self.cap_plus_end + 1 {
            Some((self.cap_plus_end + 1, self.cap_minus_start - 1))
        } else {
            None
        }
    }

    /// Inclusive index range of the bridge closure L̄ (bridge plus the two
    /// adjacent cap-boundary samples), `None` when the bridge is empty.
    pub fn bridge_closure(&self) -> Option<(usize, usize)> {
        self.bridge_interior()
            .map(|_| (self.cap_plus_end, self.cap_minus_start))
    }

    /// Inclusive index range of the right cap closure C̄⁺.
    pub fn cap_plus(&self) -> (usize, usize) {
        (0, self.cap_plus_end)
    }

    /// Inclusive index range of the left cap closure C̄⁻.
    pub fn cap_minus(&self) -> (usize, usize) {
        (self.cap_minus_start, self.m - 1)
    }

    /// True when the caps meet and no bridge exists.
    pub fn bridge_is_empty(&self) -> bool {
        self.bridge_interior().is_none()
    }

    /// Linearly interpolates a sampled field at a boundary location
    /// returned in `a_seg`/`b_seg`.
    pub fn interp(values: &[f64], seg: (usize, f64)) -> f64 {
        let (i, w) = seg;
        values[i] * (1.0 - w) + values[i + 1] * w
    }
}

/// Splits the curve into caps and bridge by the sign of ⟨ν, e₁⟩.
pub fn decompose_regions(curve: &GeneratingCurve, geom: &GeometrySamples) -> RegionDecomposition {
    let m = curve.len();
    let g = &geom.nu_e1;

    let mut cap_plus_end = 0;
    while cap_plus_end + 2 < m && g[cap_plus_end + 1] >= 0.0 {
        cap_plus_end += 1;
    }
    let mut cap_minus_start = m - 1;
    while cap_minus_start > cap_plus_end + 1 && g[cap_minus_start - 1] <= 0.0 {
        cap_minus_start -= 1;
    }

    let (a, b, a_seg, b_seg) = if cap_minus_start > cap_plus_end + 1 {
        // b: zero crossing entering the bridge from C⁺; g[cpe] ≥ 0 > g[cpe+1].
        let i = cap_plus_end;
        let wb = g[i] / (g[i] - g[i + 1]);
        let b = curve.x(i) + wb * (curve.x(i + 1) - curve.x(i));
        // a: zero crossing leaving the bridge into C⁻; g[cms−1] > 0 ≥ g[cms].
        let j = cap_minus_start - 1;
        let wa = g[j] / (g[j] - g[j + 1]);
        let a = curve.x(j) + wa * (curve.x(j + 1) - curve.x(j));
        (Some(a), Some(b), Some((j, wa)), Some((i, wb)))
    } else {
        (None, None, None, None)
    };

    RegionDecomposition { m, cap_plus_end, cap_minus_start, a, b, a_seg, b_seg }
}

/// Number of critical points of the width function ⟨F, e₁⟩ on the surface,
/// counted as sign alternations of ⟨ν, e₁⟩ along the curve with a dead band
/// of [`tol::CRITICAL_DEADBAND`] (zero runs collapse; a round surface
/// counts 1, the tube-with-caps initial surface 3).
pub fn critical_point_count(geom: &GeometrySamples) -> usize {
    let mut count = 0usize;
    let mut last = 0i8;
    for &gi in &geom.nu_e1 {
        let s = if gi > tol::CRITICAL_DEADBAND {
            1
        } else if gi < -tol::CRITICAL_DEADBAND {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Surface measure of the unit k-sphere S^k ⊂ R^{k+1}:
/// |S^k| = 2 π^{(k+1)/2} / Γ((k+1)/2).
pub fn sphere_surface_area(k: usize) -> f64 {
    // Γ(m/2) by the upward recurrence from Γ(1/2) = √π and Γ(1) = 1.
    fn gamma_half(m: usize) -> f64 {
        match m {
            1 => std::f64::consts::PI.sqrt(),
            2 => 1.0,
            _ => (m as f64 / 2.0 - 1.0) * gamma_half(m - 2),
        }
    }
    let kp1 = k + 1;
    2.0 * std::f64::consts::PI.powf(kp1 as f64 / 2.0) / gamma_half(kp1)
}

/// n-dimensional measure of the revolved hypersurface:
/// |N| = |S^{n−1}| ∫ r^{n−1} ds, by the trapezoid rule over the polyline.
pub fn area(curve: &GeneratingCurve) -> f64 {
    let pw = (curve.n() - 1) as i32;
    let omega = sphere_surface_area(curve.n() - 1);
    let pts = curve.points();
    let mut integral = 0.0;
    for w in pts.windows(2) {
        let ds = ((w[1][0] - w[0][0]).powi(2) + (w[1][1] - w[0][1]).powi(2)).sqrt();
        integral += 0.5 * (w[0][1].powi(pw) + w[1][1].powi(pw)) * ds;
    }
    omega * integral
}

/// Extrinsic diameter of the revolved hypersurface: the largest distance
/// between any two surface points, attained either on one meridian,
/// d = √((xᵢ−xⱼ)² + (rᵢ−rⱼ)²), or on opposite meridians,
/// d = √((xᵢ−xⱼ)² + (rᵢ+rⱼ)²). The latter dominates, including the
/// degenerate pair i = j (two antipodes on one revolved circle, 2rᵢ apart).
pub fn diameter(curve: &GeneratingCurve) -> f64 {
    let pts = curve.points();
    let mut best = 0.0f64;
    for i in 0..pts.len() {
        for p in &pts[i..] {
            let dx = pts[i][0] - p[0];
            let sr = pts[i][1] + p[1];
            best = best.max((dx * dx + sr * sr).sqrt());
        }
    }
    best
}

/// Distance from the axis point (c, 0) to the nearest curve sample.
fn axis_clearance(curve: &GeneratingCurve, c: f64) -> f64 {
    curve
        .points()
        .iter()
        .map(|p| ((p[0] - c) * (p[0] - c) + p[1] * p[1]).sqrt())
        .fold(f64::INFINITY, f64::min)
}

/// Largest inscribed ball centered on the axis: returns (radius, center_x)
/// maximizing the clearance g(c) = min_i |ρ_i − (c, 0)|. g is continuous
/// and piecewise smooth but can be multimodal, so a dense grid locates the
/// best basin and golden-section search refines it.
pub fn inradius(curve: &GeneratingCurve) -> (f64, f64) {
    let lo = curve.x(curve.len() - 1);
    let hi = curve.x(0);
    const GRID: usize = 256;
    let mut best_c = lo;
    let mut best_g = f64::NEG_INFINITY;
    for j in 0..=GRID {
        let c = lo + (hi - lo) * j as f64 / GRID as f64;
        let g = axis_clearance(curve, c);
        if g > best_g {
            best_g = g;
            best_c = c;
        }
    }
    let step = (hi - lo) / GRID as f64;
    let (mut a, mut b) = ((best_c - step).max(lo), (best_c + step).min(hi));
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let (mut c1, mut c2) = (b - phi * (b - a), a + phi * (b - a));
    let (mut g1, mut g2) = (axis_clearance(curve, c1), axis_clearance(curve, c2));
    for _ in 0..80 {
        if g1 < g2 {
            a = c1;
            c1 = c2;
            g1 = g2;
            c2 = a + phi * (b - a);
            g2 = axis_clearance(curve, c2);
        } else {
            b = c2;
            c2 = c1;
            g2 = g1;
            c1 = b - phi * (b - a);
            g1 = axis_clearance(curve, c1);
        }
    }
    let c = 0.5 * (a + b);
    (axis_clearance(curve, c), c)
}

/// Star-shapedness margin about the axis point (c, 0):
/// min_i ⟨ρ_i − (c, 0), ν_i⟩. Positive means every support line from that
/// center sees the surface transversally (star-shaped about the center).
pub fn star_margin(curve: &GeneratingCurve, geom: &GeometrySamples, c: f64) -> f64 {
    let mut worst = f64::INFINITY;
    for i in 0..curve.len() {
        let s = (curve.x(i) - c) * geom.nu_e1[i] + curve.r(i) * geom.nu_w[i];
        worst = worst.min(s);
    }
    worst
}

/// Searches for an axis center about which the surface is star-shaped.
/// Returns (center_x, margin) with margin > 0 if one exists, else `None`.
/// The margin is a minimum of functions linear in c, hence concave in c;
/// ternary search finds its maximizer.
pub fn star_center(curve: &GeneratingCurve, geom: &GeometrySamples) -> Option<(f64, f64)> {
    let mut lo = curve.x(curve.len() - 1);
    let mut hi = curve.x(0);
    for _ in 0..200 {
        let c1 = lo + (hi - lo) / 3.0;
        let c2 = hi - (hi - lo) / 3.0;
        if star_margin(curve, geom, c1) < star_margin(curve, geom, c2) {
            lo = c1;
        } else {
            hi = c2;
        }
    }
    let c = 0.5 * (lo + hi);
    let m = star_margin(curve, geom, c);
    (m > 0.0).then_some((c, m))
}

/// Smallest distance between two revolved hypersurfaces, attained on a
/// common meridian plane: min over sample pairs of
/// √((xᵢ−xⱼ)² + (rᵢ−rⱼ)²).
pub fn curve_distance(a: &GeneratingCurve, b: &GeneratingCurve) -> f64 {
    let mut best = f64::INFINITY;
    for p in a.points() {
        for q in b.points() {
            let dx = p[0] - q[0];
            let dr = p[1] - q[1];
            best = best.min((dx * dx + dr * dr).sqrt());
        }
    }
    best
}

/// Even–odd test for a point lying inside the closed planar region bounded
/// by the profile and the axis segment joining the poles (the meridian
/// section of the enclosed body). Points are mirrored to r ≥ 0 first; the
/// axis between the poles is interior to the revolved body.
pub fn point_in_region(curve: &GeneratingCurve, point: [f64; 2]) -> bool {
    let (px, pr) = (point[0], point[1].abs());
    let pts = curve.points();
    let m = pts.len();
    if pr == 0.0 {
        return px > pts[m - 1][0] && px < pts[0][0];
    }
    // Closed polygon: the profile plus the implicit axis return edge from
    // (x_last, 0) back to (x_first, 0); the return edge lies on r = 0 and
    // cannot be crossed by a horizontal ray at pr > 0.
    let mut inside = false;
    for w in pts.windows(2) {
        let (x1, r1) = (w[0][0], w[0][1]);
        let (x2, r2) = (w[1][0], w[1][1]);
        if (r1 > pr) != (r2 > pr) {
            let x_cross = x1 + (pr - r1) / (r2 - r1) * (x2 - x1);
            if px < x_cross {
                inside = !inside;
            }
        }
    }
    inside
}

/// True when every sample of `inner` lies strictly inside the region
/// bounded by `outer` and the two surfaces keep a positive distance.
pub fn strictly_contained(inner: &GeneratingCurve, outer: &GeneratingCurve) -> bool {
    inner.points().iter().all(|&p| point_in_region(outer, p)) && curve_distance(inner, outer) > 0.0
}

/// Axis coordinate of the centroid of the planar region between the profile
/// and the axis (trapezoid rule): x̄ = ∫ x r dx / ∫ r dx with orientation
/// absorbed. Used as the natural center for roundness measurements.
pub fn centroid_x(curve: &GeneratingCurve) -> f64 {
    let pts = curve.points();
    let mut area2 = 0.0;
    let mut moment = 0.0;
    for w in pts.windows(2) {
        let dx = w[1][0] - w[0][0];
        area2 += 0.5 * (w[0][1] + w[1][1]) * dx;
        moment += 0.5 * (w[0][0] * w[0][1] + w[1][0] * w[1][1]) * dx;
    }
    moment / area2
}

/// Relative radial oscillation about the centroid:
/// (max|ρ − x̄| − min|ρ − x̄|) / mean radius, zero exactly for a sphere.
/// Scale-invariant, so it measures roundness of the rescaled flow directly.
pub fn roundness(curve: &GeneratingCurve) -> f64 {
    let cx = centroid_x(curve);
    let mut dmin = f64::INFINITY;
    let mut dmax = 0.0f64;
    for p in curve.points() {
        let d = ((p[0] - cx) * (p[0] - cx) + p[1] * p[1]).sqrt();
        dmin = dmin.min(d);
        dmax = dmax.max(d);
    }
    (dmax - dmin) / (0.5 * (dmax + dmin))
}
