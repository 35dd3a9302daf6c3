//! The generating curve of a rotationally symmetric hypersurface.
//!
//! A hypersurface of revolution N ⊂ R^{n+1} is encoded by a polyline
//! ρ = (ρ₀, …, ρ_{M−1}), ρ_i = (x_i, r_i), in the closed upper half-plane:
//!
//! - index 0 is the **right pole** (largest x, r = 0), index M−1 the left
//!   pole (r = 0); the interior has r > 0;
//! - samples run **counterclockwise** (x decreasing over the top), so the
//!   induced tangent at the right pole is (0, 1) and the outward normal
//!   points along +e₁ there;
//! - samples are (approximately) equally spaced in arc length.
//!
//! [`GeneratingCurve::new`] validates all of this including simplicity
//! (no self-intersections); [`GeneratingCurve::resample_uniform`] restores
//! exact equal spacing with cubic accuracy, using pole-reflected ghost
//! points so the poles stay exactly on the axis.

use crate::tol;
use thiserror::Error;

/// Validation and resampling failures for [`GeneratingCurve`].
#[derive(Debug, Error)]
pub enum CurveError {
    /// The ambient dimension is too small for a hypersurface of revolution.
    #[error("hypersurface dimension n must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    /// Fewer samples than any stencil can work with.
    #[error("curve needs at least {min} samples, got {got}")]
    TooFewPoints { min: usize, got: usize },

    /// A coordinate is NaN or infinite.
    #[error("sample {index} has non-finite coordinates ({x}, {r})")]
    NonFinite { index: usize, x: f64, r: f64 },

    /// An endpoint is off the rotation axis.
    #[error("pole sample {index} must lie on the axis (r = 0), got r = {r}")]
    PoleOffAxis { index: usize, r: f64 },

    /// An interior sample touches or crosses the axis.
    #[error("interior sample {index} must have r > 0, got r = {r}")]
    InteriorOnAxis { index: usize, r: f64 },

    /// The poles are ordered backwards (the curve must start at the right).
    #[error("curve must run right-to-left: x[0] = {x_first} is not greater than x[last] = {x_last}")]
    WrongOrientation { x_first: f64, x_last: f64 },

    /// Two consecutive samples coincide.
    #[error("samples {index} and {} coincide", index + 1)]
    DuplicatePoint { index: usize },

    /// The polyline crosses itself.
    #[error("curve is not simple: segments {seg_a} and {seg_b} intersect")]
    SelfIntersection { seg_a: usize, seg_b: usize },

    /// Total length too small to resolve.
    #[error("curve is degenerate: total length {length} below {}", tol::DEGENERATE_LENGTH)]
    Degenerate { length: f64 },

    /// Resample target below the supported minimum.
    #[error("resampling needs at least {} target samples, got {got}", tol::MIN_RESAMPLE_POINTS)]
    ResampleTooCoarse { got: usize },

    /// Resampling produced a non-positive interior radius: the curve has
    /// effectively pinched onto the axis.
    #[error("resampled curve pinches onto the axis near sample {index}")]
    Pinched { index: usize },
}

/// Arc-length-sampled generating curve of a hypersurface of revolution
/// in R^{n+1}.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratingCurve {
    /// Dimension n of the hypersurface (ambient space is R^{n+1}).
    n: usize,
    /// Samples (x, r), right pole first, counterclockwise.
    points: Vec<[f64; 2]>,
}

impl GeneratingCurve {
    /// Builds a curve and validates every representation invariant,
    /// including simplicity (an O(M²) segment sweep).
    pub fn new(n: usize, points: Vec<[f64; 2]>) -> Result<Self, CurveError> {
        let curve = Self::new_unswept(n, points)?;
        if let Some((a, b)) = curve.find_self_intersection() {
            return Err(CurveError::SelfIntersection { seg_a: a, seg_b: b });
        }
        Ok(curve)
    }

    /// Builds a curve checking all O(M) invariants but skipping the O(M²)
    /// simplicity sweep. Used on hot paths (time stepping, resampling)
    /// where the caller schedules periodic sweeps instead.
    pub(crate) fn new_unswept(n: usize, points: Vec<[f64; 2]>) -> Result<Self, CurveError> {
        if n < 2 {
            return Err(CurveError::DimensionTooSmall(n));
        }
        let m = points.len();
        if m < tol::MIN_CURVE_POINTS {
            return Err(CurveError::TooFewPoints { min: tol::MIN_CURVE_POINTS, got: m });
        }
        for (i, p) in points.iter().enumerate() {
            if !p[0].is_finite() || !p[1].is_finite() {
                return Err(CurveError::NonFinite { index: i, x: p[0], r: p[1] });
            }
        }
        if points[0][1] != 0.0 {
            return Err(CurveError::PoleOffAxis { index: 0, r: points[0][1] });
        }
        if points[m - 1][1] != 0.0 {
            return Err(CurveError::PoleOffAxis { index: m - 1, r: points[m - 1][1] });
        }
        for (i, p) in points.iter().enumerate().take(m - 1).skip(1) {
            if p[1] <= 0.0 {
                return Err(CurveError::InteriorOnAxis { index: i, r: p[1] });
            }
        }
        if points[0][0] <= points[m - 1][0] {
            return Err(CurveError::WrongOrientation {
                x_first: points[0][0],
                x_last: points[m - 1][0],
            });
        }
        for i in 0..m - 1 {
            if points[i] == points[i + 1] {
                return Err(CurveError::DuplicatePoint { index: i });
            }
        }
        Ok(Self { n, points })
    }

    /// Dimension n of the hypersurface.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of samples M.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// True only for the empty curve, which cannot be constructed; provided
    /// for clippy-idiomatic pairing with [`len`](Self::len).
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// All samples, right pole first.
    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    /// Axis coordinate x_i (width ũ of the sample).
    pub fn x(&self, i: usize) -> f64 {
        self.points[i][0]
    }

    /// Distance r_i from the rotation axis (height u of the sample).
    pub fn r(&self, i: usize) -> f64 {
        self.points[i][1]
    }

    /// Sample with pole-ghost extension: indices −2, −1, M, M+1 return the
    /// reflection (x, −r) of the sample mirrored across the nearby pole.
    /// The reflected continuation is the smooth continuation of the profile
    /// through the axis, so stencils using it see pole-regular data.
    pub(crate) fn ghost(&self, i: isize) -> [f64; 2] {
        let m = self.points.len() as isize;
        let j = if i < 0 {
            -i
        } else if i >= m {
            2 * (m - 1) - i
        } else {
            return self.points[i as usize];
        };
        let p = self.points[j as usize];
        [p[0], -p[1]]
    }

    /// Chord lengths |ρ_{i+1} − ρ_i| (length M−1).
    pub fn chord_lengths(&self) -> Vec<f64> {
        self.points
            .windows(2)
            .map(|w| ((w[1][0] - w[0][0]).powi(2) + (w[1][1] - w[0][1]).powi(2)).sqrt())
            .collect()
    }

    /// Cumulative arc length (chordal): s_0 = 0, …, s_{M−1} = total length.
    pub fn cumulative_lengths(&self) -> Vec<f64> {
        let mut s = Vec::with_capacity(self.points.len());
        s.push(0.0);
        let mut acc = 0.0;
        for w in self.points.windows(2) {
            acc += ((w[1][0] - w[0][0]).powi(2) + (w[1][1] - w[0][1]).powi(2)).sqrt();
            s.push(acc);
        }
        s
    }

    /// Total chordal length of the curve.
    pub fn total_length(&self) -> f64 {
        self.chord_lengths().iter().sum()
    }

    /// Mean chord length (the nominal spacing ds).
    pub fn mean_spacing(&self) -> f64 {
        self.total_length() / (self.points.len() - 1) as f64
    }

    /// Largest relative deviation of a chord from the mean spacing.
    pub fn spacing_deviation(&self) -> f64 {
        let chords = self.chord_lengths();
        let mean = chords.iter().sum::<f64>() / chords.len() as f64;
        chords
            .iter()
            .map(|c| (c - mean).abs() / mean)
            .fold(0.0, f64::max)
    }

    /// Largest |ρ_i| over the samples (max distance of the generating curve
    /// from the origin; equals max |F| over the hypersurface).
    pub fn max_point_norm(&self) -> f64 {
        self.points
            .iter()
            .map(|p| (p[0] * p[0] + p[1] * p[1]).sqrt())
            .fold(0.0, f64::max)
    }

    /// Returns the lowest-index pair of non-adjacent segments that intersect,
    /// or `None` if the polyline is simple. O(M²).
    pub fn find_self_intersection(&self) -> Option<(usize, usize)> {
        let pts = &self.points;
        let nseg = pts.len() - 1;
        for a in 0..nseg {
            for b in (a + 2)..nseg {
                if segments_intersect(pts[a], pts[a + 1], pts[b], pts[b + 1]) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Resamples the curve to `m` samples exactly equally spaced in chordal
    /// arc length, by 4-point Lagrange (cubic) interpolation of x and r
    /// against cumulative length. Pole-reflected ghost points extend the
    /// stencils past the ends, the endpoints are reproduced exactly, and the
    /// pole radii are pinned to exactly 0.
    pub fn resample_uniform(&self, m: usize) -> Result<Self, CurveError> {
        if m < tol::MIN_RESAMPLE_POINTS {
            return Err(CurveError::ResampleTooCoarse { got: m });
        }
        let s = self.cumulative_lengths();
        let total = s[s.len() - 1];
        if total < tol::DEGENERATE_LENGTH {
            return Err(CurveError::Degenerate { length: total });
        }

        let src = self.points.len();
        // Parameter values of the ghost samples: reflection across a pole
        // preserves distances, so the ghost of s_j sits at −s_j (right end)
        // or 2·total − s_j (left end).
        let param = |i: isize| -> f64 {
            if i < 0 {
                -s[(-i) as usize]
            } else if i >= src as isize {
                2.0 * total - s[(2 * (src - 1)) - i as usize]
            } else {
                s[i as usize]
            }
        };

        let mut out = Vec::with_capacity(m);
        let mut seg = 0usize; // current segment [s_seg, s_seg+1]
        for j in 0..m {
            if j == 0 {
                out.push(self.points[0]);
                continue;
            }
            if j == m - 1 {
                out.push(self.points[src - 1]);
                continue;
            }
            let tau = total * j as f64 / (m - 1) as f64;
            while seg + 2 < src && s[seg + 1] < tau {
                seg += 1;
            }
            // Cubic through samples seg−1 .. seg+2 (ghost-extended).
            let idx = [seg as isize - 1, seg as isize, seg as isize + 1, seg as isize + 2];
            let ts: Vec<f64> = idx.iter().map(|&i| param(i)).collect();
            let ps: Vec<[f64; 2]> = idx.iter().map(|&i| self.ghost(i)).collect();
            let mut x = 0.0;
            let mut r = 0.0;
            for a in 0..4 {
                let mut w = 1.0;
                for b in 0..4 {
                    if a != b {
                        w *= (tau - ts[b]) / (ts[a] - ts[b]);
                    }
                }
                x += w * ps[a][0];
                r += w * ps[a][1];
            }
            out.push([x, r]);
        }
        // Exact pole radii survive by construction; a non-positive interior
        // radius means the curve genuinely pinches.
        for (i, p) in out.iter().enumerate().take(m - 1).skip(1) {
            if p[1] <= 0.0 {
                return Err(CurveError::Pinched { index: i });
            }
        }
        Self::new_unswept(self.n, out)
    }

    /// The curve scaled about the origin by `factor` (> 0).
    pub fn scaled(&self, factor: f64) -> Self {
        let points = self
            .points
            .iter()
            .map(|p| [p[0] * factor, p[1] * factor])
            .collect();
        Self { n: self.n, points }
    }

    /// Replaces the sample set; shares validation with the constructor but
    /// skips the simplicity sweep (hot path).
    pub(crate) fn with_points_unswept(&self, points: Vec<[f64; 2]>) -> Result<Self, CurveError> {
        Self::new_unswept(self.n, points)
    }
}

/// Proper or improper intersection test for closed 2D segments [a1,a2], [b1,b2].
fn segments_intersect(a1: [f64; 2], a2: [f64; 2], b1: [f64; 2], b2: [f64; 2]) -> bool {
    let d = |p: [f64; 2], q: [f64; 2], r: [f64; 2]| -> f64 {
        (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    };
    let on_seg = |p: [f64; 2], q: [f64; 2], r: [f64; 2]| -> bool {
        r[0] >= p[0].min(q[0]) && r[0] <= p[0].max(q[0]) && r[1] >= p[1].min(q[1]) && r[1] <= p[1].max(q[1])
    };
    let d1 = d(b1, b2, a1);
    let d2 = d(b1, b2, a2);
    let d3 = d(a1, a2, b1);
    let d4 = d(a1, a2, b2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_seg(b1, b2, a1))
        || (d2 == 0.0 && on_seg(b1, b2, a2))
        || (d3 == 0.0 && on_seg(a1, a2, b1))
        || (d4 == 0.0 && on_seg(a1, a2, b2))
}
