//! Inverse mean curvature flow (IMCF) of rotationally symmetric hypersurfaces.
//!
//! A hypersurface of revolution in R^{n+1} is represented by its *generating
//! curve*: a planar arc-length-sampled profile ρ(s) = (x(s), r(s)) running
//! counterclockwise from the right pole (on the rotation axis) over the upper
//! half-plane to the left pole. Revolving the profile about the x-axis
//! produces the hypersurface; all geometry reduces to the profile.
//!
//! The surface moves by IMCF,
//!
//! ```text
//! ∂F/∂t = ν / H,
//! ```
//!
//! outward normal speed 1/H, where H = k + (n−1)p is the mean curvature built
//! from the profile curvature k and the rotational curvature p = ⟨ν,ŵ⟩/u.
//!
//! The crate provides:
//!
//! - [`curve`]: the [`GeneratingCurve`] type and arc-length resampling;
//! - [`geometry`]: discrete curvatures, the axisymmetric Laplace–Beltrami
//!   operator, cap/bridge region decomposition, and global measurements
//!   (area, diameter, inradius, star-shapedness, curve distance);
//! - [`initial`]: initial-data constructors (spheres, graph profiles, and the
//!   tube-with-spherical-ends surface that is admissible but not star-shaped)
//!   plus the admissibility gate;
//! - [`flow`]: CFL-limited explicit time stepping, periodic reparametrization,
//!   trajectory recording with monitor series, and rescaling;
//! - [`verify`]: every quantitative estimate as a pass/fail check with margins
//!   over a trajectory, including finite-difference residuals of the exact
//!   evolution equations;
//! - [`io`]: plain-text snapshot files, trajectory directories, and the
//!   monitors CSV.

pub mod curve;
pub mod flow;
pub mod geometry;
pub mod initial;
pub mod io;
pub mod tol;
pub mod verify;

pub use curve::GeneratingCurve;
pub use flow::{FlowConfig, FlowState, Trajectory};
pub use geometry::{GeometrySamples, RegionDecomposition};
pub use initial::{AdmissibilityReport, TubeSpheresParams};
pub use verify::{CheckResult, CheckStatus, EstimateReport};
