//! Run-specification files.
//!
//! A run spec is a TOML document whose keys mirror the field names used
//! throughout the library (the same names appear in `metadata.json` echoes).
//! Every value is optional: the spec supplies defaults, and any value given
//! on the command line wins over the file. A single file can therefore
//! describe a whole pipeline — initial data, flow parameters, verification
//! toggles, and tolerance overrides — and be reused across subcommands:
//!
//! ```text
//! n = 2
//! output = "out/dumbbell"
//!
//! [initial]
//! kind = "tube-spheres"
//! ell = 8.0
//! c = 0.6
//! m = 1200
//!
//! [flow]
//! t_end = 6.0
//! sigma = 0.4
//! m = 800
//! snapshot_dt = 0.05
//! scheme = "euler"
//!
//! [verify]
//! checks = ["width_bound", "area_growth"]
//! refined = "out/dumbbell-fine"
//!
//! [tolerances]
//! min_order = 1.5
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use imcf::verify::CheckTolerances;
use serde::Deserialize;

/// A full pipeline description. Each subcommand reads the sections it
/// needs and ignores the rest.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    /// Hypersurface dimension n (the surface lives in R^{n+1}).
    pub n: Option<usize>,
    /// Output directory.
    pub output: Option<PathBuf>,
    /// Initial-data descriptor.
    #[serde(default)]
    pub initial: InitialSpec,
    /// Flow parameters (same names as the flow config echoed into
    /// `metadata.json`).
    #[serde(default)]
    pub flow: FlowSpec,
    /// Verification inputs.
    #[serde(default)]
    pub verify: VerifySpec,
    /// Tolerance overrides for the verification checks.
    pub tolerances: Option<CheckTolerances>,
}

/// Which initial surface to build, and at what resolution.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    /// One of `sphere`, `graph`, `tube-spheres`.
    pub kind: Option<String>,
    /// Sphere radius.
    pub radius: Option<f64>,
    /// Sphere center abscissa.
    pub center: Option<f64>,
    /// Tube half-length parameter ℓ.
    pub ell: Option<f64>,
    /// Tube neck radius c ∈ (½, 1).
    pub c: Option<f64>,
    /// Cutoff ramp start, as a fraction of the transition zone.
    pub ramp_start: Option<f64>,
    /// Cutoff ramp end, as a fraction of the transition zone.
    pub ramp_end: Option<f64>,
    /// Input file: profile samples for `graph`, or the curve file a
    /// simulation starts from.
    pub path: Option<PathBuf>,
    /// Sample count of the constructed curve.
    pub m: Option<usize>,
}

/// Flow-parameter overrides; unset fields fall back to the library
/// defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowSpec {
    /// Final flow time.
    pub t_end: Option<f64>,
    /// CFL safety factor in (0, 1].
    pub sigma: Option<f64>,
    /// Working sample count.
    pub m: Option<usize>,
    /// Resampling cadence in steps.
    pub resample_every: Option<usize>,
    /// Snapshot spacing in flow time.
    pub snapshot_dt: Option<f64>,
    /// Time-stepping scheme name.
    pub scheme: Option<String>,
    /// Abort threshold on min H.
    pub h_min_stop: Option<f64>,
    /// Abort threshold on the neck radius.
    pub neck_radius_stop: Option<f64>,
}

/// Verification inputs: which checks to run and companion trajectories.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySpec {
    /// Subset of check names to run (all when unset).
    pub checks: Option<Vec<String>>,
    /// Directory of an enclosing trajectory, for the avoidance check.
    pub outer: Option<PathBuf>,
    /// Directory of a doubled-resolution run of the same initial data,
    /// for residual convergence orders.
    pub refined: Option<PathBuf>,
}

impl RunSpec {
    /// Loads a spec from a TOML file; unknown keys are rejected.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        toml::from_str(&text)
            .with_context(|| format!("malformed config file {}", path.display()))
    }

    /// Loads the spec named by `path`, or the default (all-unset) spec.
    pub fn load_optional(path: Option<&Path>) -> Result<Self> {
        match path {
            Some(p) => Self::load(p),
            None => Ok(Self::default()),
        }
    }
}
