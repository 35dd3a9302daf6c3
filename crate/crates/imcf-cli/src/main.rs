//! `imcf` — command-line front end for the rotationally symmetric inverse
//! mean curvature flow toolkit.
//!
//! Four subcommands cover the pipeline:
//!
//! ```text
//! imcf make-initial --tube-spheres --ell 8 --c 0.6 --n 2 --M 1200 -o out/
//! imcf simulate --initial out/initial.curve -o out/run --t-end 6 --m 800
//! imcf verify out/run [OUTER_DIR] [--refined out/run-fine] [-o report.json]
//! imcf report out/run out/run-fine -o wide.csv
//! ```
//!
//! `make-initial` constructs a surface and writes `initial.curve` plus
//! `admissibility.json`; `simulate` integrates the flow and writes a
//! trajectory directory (snapshots, `monitors.csv`, `run_metadata.json`);
//! `verify` runs the estimate checks over a trajectory and writes
//! `report.json`; `report` merges the monitor series of several runs into
//! one wide CSV for plotting.
//!
//! Every parameter can also be supplied in a TOML run spec via `--config`
//! (see the `config` module); values given on the command line win.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 a check failed or the
//! flow stopped early, 3 checks were skipped for lack of data (none
//! failed). The `IMCF_THREADS` environment variable caps verification
//! worker threads (default 1); numeric outputs are identical regardless.

mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use config::RunSpec;
use imcf::flow::{self, FlowConfig, TerminationReason, Trajectory};
use imcf::initial::{self, TubeSpheresParams};
use imcf::io::{self, MONITORS_HEADER};
use imcf::verify::{self, CheckContext, CheckTolerances, SnapshotData};

// ---------------------------------------------------------------------------
// Argument declarations
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "imcf",
    version,
    about = "Inverse mean curvature flow of rotationally symmetric hypersurfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct an initial surface and report its admissibility.
    MakeInitial(MakeInitialArgs),
    /// Run the flow from a curve file and record a trajectory directory.
    Simulate(SimulateArgs),
    /// Run the verification checks over a recorded trajectory.
    Verify(VerifyArgs),
    /// Merge the monitor series of several runs into one wide CSV.
    Report(ReportArgs),
}

#[derive(Args)]
struct MakeInitialArgs {
    /// TOML run spec supplying defaults for any flag not given.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Build a round sphere with this radius.
    #[arg(long, value_name = "RADIUS")]
    sphere: Option<f64>,
    /// Build the surface of revolution of a profile r(x) read from a
    /// two-column file (`x r` per line; `#` comments).
    #[arg(long, value_name = "FILE")]
    graph: Option<PathBuf>,
    /// Build the tube-with-spherical-ends surface (admissible but not
    /// star-shaped).
    #[arg(long)]
    tube_spheres: bool,
    /// Hypersurface dimension n (the surface lives in R^{n+1}).
    #[arg(long = "n", value_name = "N")]
    n: Option<usize>,
    /// Sample count of the constructed curve.
    #[arg(long = "M", alias = "m", value_name = "M")]
    m: Option<usize>,
    /// Sphere center abscissa.
    #[arg(long, value_name = "X")]
    center: Option<f64>,
    /// Tube half-length parameter ℓ (≥ 4).
    #[arg(long, value_name = "ELL")]
    ell: Option<f64>,
    /// Tube neck radius c in (1/2, 1).
    #[arg(long, value_name = "C")]
    c: Option<f64>,
    /// Cutoff ramp start, as a fraction of the transition zone.
    #[arg(long, value_name = "S")]
    ramp_start: Option<f64>,
    /// Cutoff ramp end, as a fraction of the transition zone.
    #[arg(long, value_name = "S")]
    ramp_end: Option<f64>,
    /// Output directory for initial.curve and admissibility.json.
    #[arg(short, long, value_name = "DIR")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// TOML run spec supplying defaults for any flag not given.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Curve file to start from (as written by make-initial).
    #[arg(long, value_name = "FILE")]
    initial: Option<PathBuf>,
    /// Output trajectory directory.
    #[arg(short, long, value_name = "DIR")]
    output: Option<PathBuf>,
    /// Final flow time.
    #[arg(long, value_name = "T")]
    t_end: Option<f64>,
    /// CFL safety factor in (0, 1].
    #[arg(long, value_name = "SIGMA")]
    sigma: Option<f64>,
    /// Working sample count (defaults to the input curve's).
    #[arg(long, alias = "M", value_name = "M")]
    m: Option<usize>,
    /// Resampling cadence in steps.
    #[arg(long, value_name = "K")]
    resample_every: Option<usize>,
    /// Snapshot spacing in flow time.
    #[arg(long, value_name = "DT")]
    snapshot_dt: Option<f64>,
    /// Time-stepping scheme (euler or midpoint).
    #[arg(long, value_name = "NAME")]
    scheme: Option<String>,
    /// Stop (with a degenerate-speed report) once min H falls below this.
    #[arg(long, value_name = "H")]
    h_min_stop: Option<f64>,
    /// Stop (with a neck-pinch report) once the neck radius falls below
    /// this.
    #[arg(long, value_name = "R")]
    neck_radius_stop: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// TOML run spec supplying defaults for any flag not given.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Trajectory directory to verify.
    dir: PathBuf,
    /// Directory of an enclosing trajectory (this one inside it), for the
    /// avoidance check.
    outer: Option<PathBuf>,
    /// Directory of a doubled-resolution run of the same initial data,
    /// for residual convergence orders.
    #[arg(long, value_name = "DIR")]
    refined: Option<PathBuf>,
    /// Comma-separated subset of checks to run (default: all).
    #[arg(long, value_delimiter = ',', value_name = "NAMES")]
    checks: Option<Vec<String>>,
    /// Where to write the JSON report (default: DIR/report.json).
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// Trajectory directories whose monitors.csv files to merge.
    #[arg(required = true, value_name = "DIR")]
    dirs: Vec<PathBuf>,
    /// Output CSV file (default: stdout).
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// Entry point and exit-code policy
// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too; only genuine usage
            // errors exit nonzero (1, per the documented contract).
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::MakeInitial(args) => cmd_make_initial(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Report(args) => cmd_report(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// Worker-thread cap from `IMCF_THREADS` (default 1; minimum 1).
fn threads_from_env() -> usize {
    std::env::var("IMCF_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .map_or(1, |t| t.max(1))
}

// ---------------------------------------------------------------------------
// make-initial
// ---------------------------------------------------------------------------

fn cmd_make_initial(args: MakeInitialArgs) -> Result<u8> {
    let spec = RunSpec::load_optional(args.config.as_deref())?;
    let n = args.n.or(spec.n).unwrap_or(2);
    let out_dir = args
        .output
        .or(spec.output)
        .unwrap_or_else(|| PathBuf::from("."));

    // Exactly one surface kind, from the flags or the spec file.
    let flag_kinds = usize::from(args.sphere.is_some())
        + usize::from(args.graph.is_some())
        + usize::from(args.tube_spheres);
    if flag_kinds > 1 {
        bail!("choose exactly one of --sphere, --graph, --tube-spheres");
    }
    enum Kind {
        Sphere,
        Graph,
        TubeSpheres,
    }
    let kind = if args.sphere.is_some() {
        Kind::Sphere
    } else if args.graph.is_some() {
        Kind::Graph
    } else if args.tube_spheres {
        Kind::TubeSpheres
    } else {
        match spec.initial.kind.as_deref() {
            Some("sphere") => Kind::Sphere,
            Some("graph") => Kind::Graph,
            Some("tube-spheres") => Kind::TubeSpheres,
            Some(other) => bail!(
                "unknown initial kind '{other}' (expected sphere, graph, or tube-spheres)"
            ),
            None => bail!(
                "no surface selected: pass --sphere, --graph, or --tube-spheres \
                 (or set initial.kind in a --config file)"
            ),
        }
    };

    let curve = match kind {
        Kind::Sphere => {
            let radius = args
                .sphere
                .or(spec.initial.radius)
                .context("--sphere needs a radius")?;
            let center = args.center.or(spec.initial.center).unwrap_or(0.0);
            let m = args.m.or(spec.initial.m).unwrap_or(400);
            initial::make_sphere(n, radius, center, m)?
        }
        Kind::Graph => {
            let path = args
                .graph
                .clone()
                .or(spec.initial.path)
                .context("--graph needs a profile file")?;
            let (xs, ys) = read_profile_file(&path)?;
            let m = args.m.or(spec.initial.m).unwrap_or(400);
            initial::make_graph_surface(n, &xs, &ys, m)?
        }
        Kind::TubeSpheres => {
            let ell = args.ell.or(spec.initial.ell).unwrap_or(8.0);
            let c = args.c.or(spec.initial.c).unwrap_or(0.6);
            let m = args.m.or(spec.initial.m).unwrap_or(1200);
            let mut params = TubeSpheresParams::new(ell, c, m);
            if let Some(s) = args.ramp_start.or(spec.initial.ramp_start) {
                params.ramp_start = s;
            }
            if let Some(s) = args.ramp_end.or(spec.initial.ramp_end) {
                params.ramp_end = s;
            }
            initial::make_tube_spheres(n, params)?
        }
    };

    let report = initial::check_admissible(&curve)?;

    fs::create_dir_all(&out_dir)
        .with_context(|| format!("cannot create output directory {}", out_dir.display()))?;
    let curve_path = out_dir.join("initial.curve");
    io::write_curve_file(&curve_path, &curve, 0.0)?;
    let report_path = out_dir.join("admissibility.json");
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    io::atomic_write(&report_path, &(json + "\n"))?;

    println!(
        "wrote {} ({} samples, n = {})",
        curve_path.display(),
        curve.len(),
        n
    );
    println!(
        "bridge ratio = {:.6} (threshold {:.6}{})",
        report.ratio,
        report.threshold,
        if report.bridge_empty { ", bridge empty" } else { "" }
    );
    println!("min H = {:.6}", report.min_h);
    println!("star-shaped = {}", report.star_shaped);
    println!("admissible = {}", report.admissible);
    println!("wrote {}", report_path.display());
    Ok(0)
}

/// Reads a two-column `x r` profile file (whitespace- or comma-separated;
/// `#` starts a comment).
fn read_profile_file(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read profile file {}", path.display()))?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let s = line.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .collect();
        if cols.len() != 2 {
            bail!(
                "{}:{}: expected two columns `x r`, found {}",
                path.display(),
                k + 1,
                cols.len()
            );
        }
        let parse = |t: &str| -> Result<f64> {
            t.parse()
                .with_context(|| format!("{}:{}: bad number '{t}'", path.display(), k + 1))
        };
        xs.push(parse(cols[0])?);
        ys.push(parse(cols[1])?);
    }
    Ok((xs, ys))
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

fn cmd_simulate(args: SimulateArgs) -> Result<u8> {
    let spec = RunSpec::load_optional(args.config.as_deref())?;
    let initial_path = args
        .initial
        .or(spec.initial.path)
        .context("no initial curve: pass --initial FILE (or set initial.path in a --config file)")?;
    let out_dir = args
        .output
        .or(spec.output)
        .context("no output directory: pass -o DIR (or set output in a --config file)")?;

    let (curve, t0) = io::read_curve_file(&initial_path)?;
    if t0 != 0.0 {
        eprintln!("note: initial curve was recorded at t = {t0}; the run restarts its clock at 0");
    }

    let defaults = FlowConfig::default();
    let cfg = FlowConfig {
        t_end: args.t_end.or(spec.flow.t_end).unwrap_or(defaults.t_end),
        sigma: args.sigma.or(spec.flow.sigma).unwrap_or(defaults.sigma),
        m: args.m.or(spec.flow.m).unwrap_or(curve.len()),
        resample_every: args
            .resample_every
            .or(spec.flow.resample_every)
            .unwrap_or(defaults.resample_every),
        snapshot_dt: args
            .snapshot_dt
            .or(spec.flow.snapshot_dt)
            .unwrap_or(defaults.snapshot_dt),
        scheme: args.scheme.or(spec.flow.scheme).unwrap_or(defaults.scheme),
        h_min_stop: args.h_min_stop.or(spec.flow.h_min_stop),
        neck_radius_stop: args.neck_radius_stop.or(spec.flow.neck_radius_stop),
    };

    let started = Instant::now();
    let traj = flow::run(&cfg, &curve)?;
    let wall = started.elapsed().as_secs_f64();
    io::write_trajectory(&out_dir, &traj, Some(wall))?;

    let last_t = traj.snapshots.last().map_or(0.0, |s| s.t);
    println!(
        "{} snapshots to t = {:.6} in {} steps ({:.1} s wall); wrote {}",
        traj.snapshots.len(),
        last_t,
        traj.steps_total,
        wall,
        out_dir.display()
    );
    match &traj.termination {
        TerminationReason::ReachedEnd => Ok(0),
        other => {
            eprintln!("flow stopped early: {other}");
            Ok(2)
        }
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

/// A trajectory together with its per-snapshot analysis.
struct Analyzed {
    traj: Trajectory,
    snaps: Vec<SnapshotData>,
}

fn load_analyzed(dir: &Path, threads: usize) -> Result<Analyzed> {
    let traj = io::read_trajectory(dir)
        .with_context(|| format!("cannot load trajectory {}", dir.display()))?;
    let snaps = verify::analyze(&traj, threads)
        .with_context(|| format!("cannot analyze trajectory {}", dir.display()))?;
    Ok(Analyzed { traj, snaps })
}

fn cmd_verify(args: VerifyArgs) -> Result<u8> {
    let spec = RunSpec::load_optional(args.config.as_deref())?;
    let threads = threads_from_env();

    let main = load_analyzed(&args.dir, threads)?;
    let outer = match args.outer.or(spec.verify.outer) {
        Some(dir) => Some(load_analyzed(&dir, threads)?),
        None => None,
    };
    let refined = match args.refined.or(spec.verify.refined) {
        Some(dir) => Some(load_analyzed(&dir, threads)?),
        None => None,
    };
    let tols = spec.tolerances.unwrap_or_else(CheckTolerances::default);
    let checks = args.checks.or(spec.verify.checks);

    let cx = CheckContext {
        traj: &main.traj,
        snaps: &main.snaps,
        outer: outer.as_ref().map(|a| (&a.traj, a.snaps.as_slice())),
        refined: refined.as_ref().map(|a| (&a.traj, a.snaps.as_slice())),
        tols: &tols,
    };
    let report = verify::run_checks(&cx, checks.as_deref(), threads)?;

    let report_path = args.output.unwrap_or_else(|| args.dir.join("report.json"));
    let json = serde_json::to_string_pretty(&report.to_json()).expect("report serializes");
    io::atomic_write(&report_path, &(json + "\n"))?;

    for line in report.summary_lines() {
        println!("{line}");
    }
    println!("wrote {}", report_path.display());
    Ok(u8::try_from(report.exit_code()).expect("exit codes are small"))
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

/// The thirteen per-run monitor values of one row, formatted as in
/// `monitors.csv` (everything after the leading `t` column).
fn monitor_values(row: &imcf::flow::MonitorRow) -> [String; 13] {
    let f = io::csv_float;
    [
        f(row.min_h),
        f(row.max_h),
        f(row.min_u),
        f(row.max_u),
        f(row.max_au),
        f(row.max_v_l),
        f(row.pratio_l),
        f(row.area),
        f(row.a),
        f(row.b),
        f(row.roundness),
        row.star.to_string(),
        row.critcount.to_string(),
    ]
}

fn cmd_report(args: ReportArgs) -> Result<u8> {
    // Column prefixes: directory basenames, deduplicated by ordinal.
    let mut labels: Vec<String> = Vec::with_capacity(args.dirs.len());
    for dir in &args.dirs {
        let base = dir
            .file_name()
            .map_or_else(|| dir.display().to_string(), |s| s.to_string_lossy().into_owned());
        let mut label = base.clone();
        let mut k = 2;
        while labels.contains(&label) {
            label = format!("{base}-{k}");
            k += 1;
        }
        labels.push(label);
    }

    let runs: Vec<Vec<imcf::flow::MonitorRow>> = args
        .dirs
        .iter()
        .map(|dir| io::read_monitors(&dir.join("monitors.csv")))
        .collect::<Result<_, _>>()?;

    // Merge on flow time: the union of all recorded times, ascending.
    // Runs with the same snapshot spacing share their times exactly; a
    // tiny tolerance absorbs the final clipped step.
    const T_MERGE: f64 = 1e-12;
    let mut times: Vec<f64> = runs.iter().flatten().map(|r| r.t).collect();
    times.sort_by(f64::total_cmp);
    times.dedup_by(|a, b| (*a - *b).abs() <= T_MERGE);

    let names: Vec<&str> = MONITORS_HEADER.split(',').skip(1).collect();
    let mut out = String::new();
    out.push('t');
    for label in &labels {
        for name in &names {
            out.push(',');
            out.push_str(&format!("{label}.{name}"));
        }
    }
    out.push('\n');

    // Per run, a cursor into its time-sorted rows; monitor rows are
    // recorded in increasing t already.
    let mut cursors = vec![0usize; runs.len()];
    for &t in &times {
        out.push_str(&io::csv_float(t));
        for (rows, cursor) in runs.iter().zip(cursors.iter_mut()) {
            while *cursor < rows.len() && rows[*cursor].t < t - T_MERGE {
                *cursor += 1;
            }
            if *cursor < rows.len() && (rows[*cursor].t - t).abs() <= T_MERGE {
                for v in monitor_values(&rows[*cursor]) {
                    out.push(',');
                    out.push_str(&v);
                }
                *cursor += 1;
            } else {
                // This run has no row at time t: leave its cells empty.
                for _ in 0..names.len() {
                    out.push(',');
                }
            }
        }
        out.push('\n');
    }

    match args.output {
        Some(path) => {
            io::atomic_write(&path, &out)?;
            println!(
                "merged {} runs over {} times into {}",
                runs.len(),
                times.len(),
                path.display()
            );
        }
        None => print!("{out}"),
    }
    Ok(0)
}
