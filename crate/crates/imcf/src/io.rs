//! On-disk formats for curves, trajectories, and monitor series.
//!
//! A trajectory directory laid out by [`write_trajectory`] looks like
//!
//! ```text
//! run/
//! ├── snapshots/
//! │   ├── t=0.000000.curve     one file per recorded snapshot
//! │   └── t=0.050000.curve
//! ├── monitors.csv             one row of scalar diagnostics per snapshot
//! └── run_metadata.json        flow configuration, termination, step count
//! ```
//!
//! Curve files are plain text: a single header line
//! `# imcf-curve n=<dimension> t=<time>` followed by one `x r` pair per
//! sample in full (17 significant digit) precision, so a written curve
//! reloads bit-for-bit. [`read_trajectory`] tolerates a missing
//! `monitors.csv` or `run_metadata.json` (filling in defaults) but requires
//! at least one snapshot.
//!
//! All writes go through [`atomic_write`]: content lands in a temporary
//! file in the destination directory and is renamed into place, so a
//! crash mid-write never leaves a truncated file behind.

use crate::curve::{CurveError, GeneratingCurve};
use crate::flow::{FlowConfig, MonitorRow, Snapshot, TerminationReason, Trajectory};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Column order of `monitors.csv`.
pub const MONITORS_HEADER: &str =
    "t,minH,maxH,minu,maxu,maxau,maxvL,pratioL,area,a,b,roundness,star,critcount";

/// Failures reading or writing trajectory data.
#[derive(Debug, Error)]
pub enum IoError {
    /// Underlying filesystem failure.
    #[error("i/o error on {path}: {source}")]
    Io {
        /// File or directory involved.
        path: PathBuf,
        /// Operating-system error.
        source: std::io::Error,
    },

    /// A curve file did not parse.
    #[error("malformed curve file {path}: {detail}")]
    MalformedCurve {
        /// Offending file.
        path: PathBuf,
        /// What was wrong.
        detail: String,
    },

    /// A monitors CSV row did not parse.
    #[error("malformed monitors file {path} at line {line}: {detail}")]
    MalformedMonitors {
        /// Offending file.
        path: PathBuf,
        /// 1-based line number.
        line: usize,
        /// What was wrong.
        detail: String,
    },

    /// The metadata JSON did not parse.
    #[error("malformed metadata file {path}: {detail}")]
    MalformedMetadata {
        /// Offending file.
        path: PathBuf,
        /// What was wrong.
        detail: String,
    },

    /// A trajectory directory holds no snapshot files.
    #[error("no snapshot files found under {0}")]
    NoSnapshots(PathBuf),

    /// Snapshot files disagree about the ambient dimension.
    #[error("inconsistent dimension in {path}: expected n = {expected}, found n = {got}")]
    InconsistentDimension {
        /// Expected dimension (from the first snapshot).
        expected: usize,
        /// Dimension found.
        got: usize,
        /// Offending file.
        path: PathBuf,
    },

    /// A loaded curve failed validation.
    #[error(transparent)]
    Curve(#[from] CurveError),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::Io { path: path.to_path_buf(), source }
}

/// Writes `contents` to `path` atomically: a temporary file in the same
/// directory is written, flushed, and renamed over the destination.
pub fn atomic_write(path: &Path, contents: &str) -> Result<(), IoError> {
    let tmp = path.with_extension(match path.extension() {
        Some(ext) => format!("{}.tmp", ext.to_string_lossy()),
        None => "tmp".to_string(),
    });
    fs::write(&tmp, contents).map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

/// Formats one float for CSV: shortest round-trip representation, with
/// NaN spelled `nan` (Rust parses it back case-insensitively).
pub fn csv_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x}")
    }
}

// ---------------------------------------------------------------------------
// Curve files
// ---------------------------------------------------------------------------

/// Serializes one curve with its flow time to the text format.
pub fn curve_to_string(curve: &GeneratingCurve, t: f64) -> String {
    let mut out = String::with_capacity(curve.len() * 52 + 64);
    let _ = writeln!(out, "# imcf-curve n={} t={}", curve.n(), t);
    for i in 0..curve.len() {
        let _ = writeln!(out, "{:.16e} {:.16e}", curve.x(i), curve.r(i));
    }
    out
}

/// Writes one curve file (atomic).
pub fn write_curve_file(path: &Path, curve: &GeneratingCurve, t: f64) -> Result<(), IoError> {
    atomic_write(path, &curve_to_string(curve, t))
}

/// Reads one curve file, returning the curve (fully validated) and its
/// recorded flow time.
pub fn read_curve_file(path: &Path) -> Result<(GeneratingCurve, f64), IoError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let bad = |detail: &str| IoError::MalformedCurve {
        path: path.to_path_buf(),
        detail: detail.to_string(),
    };
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty file"))?;
    let rest = header
        .strip_prefix("# imcf-curve ")
        .ok_or_else(|| bad("missing '# imcf-curve' header"))?;
    let mut n: Option<usize> = None;
    let mut t: Option<f64> = None;
    for token in rest.split_whitespace() {
        if let Some(v) = token.strip_prefix("n=") {
            n = Some(v.parse().map_err(|_| bad(&format!("bad dimension token '{token}'")))?);
        } else if let Some(v) = token.strip_prefix("t=") {
            t = Some(v.parse().map_err(|_| bad(&format!("bad time token '{token}'")))?);
        }
    }
    let n = n.ok_or_else(|| bad("header lacks n=<dimension>"))?;
    let t = t.ok_or_else(|| bad("header lacks t=<time>"))?;
    let mut points = Vec::new();
    for (k, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let parse = |s: Option<&str>| -> Result<f64, IoError> {
            s.and_then(|w| w.parse().ok())
                .ok_or_else(|| bad(&format!("bad sample on data line {}", k + 1)))
        };
        let x = parse(it.next())?;
        let r = parse(it.next())?;
        if it.next().is_some() {
            return Err(bad(&format!("extra columns on data line {}", k + 1)));
        }
        points.push([x, r]);
    }
    let curve = GeneratingCurve::new(n, points)?;
    Ok((curve, t))
}

// ---------------------------------------------------------------------------
// Monitors CSV
// ---------------------------------------------------------------------------

/// Serializes the monitor series to CSV (header included).
pub fn monitors_to_string(rows: &[MonitorRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 160 + MONITORS_HEADER.len() + 1);
    out.push_str(MONITORS_HEADER);
    out.push('\n');
    for row in rows {
        let cols = [
            csv_float(row.t),
            csv_float(row.min_h),
            csv_float(row.max_h),
            csv_float(row.min_u),
            csv_float(row.max_u),
            csv_float(row.max_au),
            csv_float(row.max_v_l),
            csv_float(row.pratio_l),
            csv_float(row.area),
            csv_float(row.a),
            csv_float(row.b),
            csv_float(row.roundness),
            (row.star as u8).to_string(),
            row.critcount.to_string(),
        ];
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    out
}

/// Parses a monitors CSV produced by [`monitors_to_string`].
pub fn parse_monitors(path: &Path, text: &str) -> Result<Vec<MonitorRow>, IoError> {
    let bad = |line: usize, detail: String| IoError::MalformedMonitors {
        path: path.to_path_buf(),
        line,
        detail,
    };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| bad(1, "empty file".into()))?;
    if header.trim() != MONITORS_HEADER {
        return Err(bad(1, format!("unexpected header '{}'", header.trim())));
    }
    let mut rows = Vec::new();
    for (k, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 14 {
            return Err(bad(k + 1, format!("expected 14 columns, found {}", cols.len())));
        }
        let f = |j: usize| -> Result<f64, IoError> {
            cols[j]
                .trim()
                .parse()
                .map_err(|_| bad(k + 1, format!("bad float '{}' in column {}", cols[j], j + 1)))
        };
        rows.push(MonitorRow {
            t: f(0)?,
            min_h: f(1)?,
            max_h: f(2)?,
            min_u: f(3)?,
            max_u: f(4)?,
            max_au: f(5)?,
            max_v_l: f(6)?,
            pratio_l: f(7)?,
            area: f(8)?,
            a: f(9)?,
            b: f(10)?,
            roundness: f(11)?,
            star: match cols[12].trim() {
                "0" => false,
                "1" => true,
                other => return Err(bad(k + 1, format!("bad star flag '{other}'"))),
            },
            critcount: cols[13]
                .trim()
                .parse()
                .map_err(|_| bad(k + 1, format!("bad count '{}'", cols[13])))?,
        });
    }
    Ok(rows)
}

/// Reads a monitors CSV file.
pub fn read_monitors(path: &Path) -> Result<Vec<MonitorRow>, IoError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_monitors(path, &text)
}

// ---------------------------------------------------------------------------
// Trajectory directories
// ---------------------------------------------------------------------------

/// Sidecar metadata for one run. Wall time lives here, deliberately apart
/// from the numeric outputs: reruns reproduce every number bit-for-bit
/// while timings vary.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct RunMetadata {
    n: usize,
    config: FlowConfig,
    termination: TerminationReason,
    steps_total: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_seconds: Option<f64>,
}

/// Writes a trajectory directory (see the module docs for the layout).
/// `wall_seconds` is recorded in the metadata only.
pub fn write_trajectory(
    dir: &Path,
    traj: &Trajectory,
    wall_seconds: Option<f64>,
) -> Result<(), IoError> {
    let snap_dir = dir.join("snapshots");
    fs::create_dir_all(&snap_dir).map_err(io_err(&snap_dir))?;
    let mut used: Vec<String> = Vec::with_capacity(traj.snapshots.len());
    for snap in &traj.snapshots {
        let mut name = format!("t={:.6}", snap.t);
        if used.contains(&name) {
            // Snapshots closer together than the printed precision get an
            // ordinal suffix so none are silently overwritten.
            name = format!("t={:.6}-{}", snap.t, used.len());
        }
        used.push(name.clone());
        write_curve_file(&snap_dir.join(format!("{name}.curve")), &snap.curve, snap.t)?;
    }
    atomic_write(&dir.join("monitors.csv"), &monitors_to_string(&traj.monitors))?;
    let meta = RunMetadata {
        n: traj.n,
        config: traj.config.clone(),
        termination: traj.termination.clone(),
        steps_total: traj.steps_total,
        wall_seconds,
    };
    let meta_path = dir.join("run_metadata.json");
    let text = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    atomic_write(&meta_path, &(text + "\n"))
}

/// Reads a trajectory directory back. Snapshots are ordered by their
/// recorded times; `monitors.csv` and `run_metadata.json` are optional
/// (an empty monitor series and a default configuration are substituted).
pub fn read_trajectory(dir: &Path) -> Result<Trajectory, IoError> {
    let snap_dir = dir.join("snapshots");
    let entries = fs::read_dir(&snap_dir).map_err(io_err(&snap_dir))?;
    let mut snapshots: Vec<Snapshot> = Vec::new();
    let mut n: Option<usize> = None;
    for entry in entries {
        let entry = entry.map_err(io_err(&snap_dir))?;
        let path = entry.path();
        if path.extension().and_then(|e| e.to_str()) != Some("curve") {
            continue;
        }
        let (curve, t) = read_curve_file(&path)?;
        match n {
            None => n = Some(curve.n()),
            Some(expected) if expected != curve.n() => {
                return Err(IoError::InconsistentDimension {
                    expected,
                    got: curve.n(),
                    path,
                });
            }
            Some(_) => {}
        }
        snapshots.push(Snapshot { t, curve });
    }
    let Some(n) = n else {
        return Err(IoError::NoSnapshots(dir.to_path_buf()));
    };
    snapshots.sort_by(|a, b| a.t.total_cmp(&b.t));

    let monitors_path = dir.join("monitors.csv");
    let monitors = if monitors_path.exists() {
        read_monitors(&monitors_path)?
    } else {
        Vec::new()
    };

    let meta_path = dir.join("run_metadata.json");
    let meta: RunMetadata = if meta_path.exists() {
        let text = fs::read_to_string(&meta_path).map_err(io_err(&meta_path))?;
        serde_json::from_str(&text).map_err(|e| IoError::MalformedMetadata {
            path: meta_path.clone(),
            detail: e.to_string(),
        })?
    } else {
        RunMetadata {
            n,
            config: FlowConfig { m: snapshots[0].curve.len(), ..FlowConfig::default() },
            termination: TerminationReason::ReachedEnd,
            steps_total: 0,
            wall_seconds: None,
        }
    };
    Ok(Trajectory {
        n,
        config: meta.config,
        snapshots,
        monitors,
        termination: meta.termination,
        steps_total: meta.steps_total,
    })
}
