//! End-to-end tests of the `imcf` binary: every subcommand is exercised as
//! a subprocess, and the documented exit-code contract is pinned (0 ok,
//! 1 usage/IO, 2 failure or early stop, 3 skips only).

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

const BIN: &str = env!("CARGO_BIN_EXE_imcf");

/// Runs the binary with `args` in `dir` and captures everything.
fn imcf(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .env("IMCF_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn assert_exit(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "expected exit {code}\n--- stdout ---\n{}\n--- stderr ---\n{}",
        stdout(out),
        stderr(out)
    );
}

/// Builds a small sphere and runs a short flow; returns the trajectory
/// directory name. Shared by the verify/report tests.
fn quick_sphere_run(root: &Path, m: &str, run_name: &str) -> std::path::PathBuf {
    let out = imcf(root, &["make-initial", "--sphere", "1", "--n", "2", "--M", m, "-o", "init"]);
    assert_exit(&out, 0);
    let out = imcf(
        root,
        &[
            "simulate",
            "--initial",
            "init/initial.curve",
            "-o",
            run_name,
            "--t-end",
            "0.2",
            "--snapshot-dt",
            "0.05",
        ],
    );
    assert_exit(&out, 0);
    root.join(run_name)
}

// ---------------------------------------------------------------------------
// make-initial
// ---------------------------------------------------------------------------

#[test]
fn make_initial_sphere_writes_curve_and_admissibility() {
    let tmp = tempdir().unwrap();
    let out = imcf(tmp.path(), &["make-initial", "--sphere", "1", "--n", "2", "-o", "out"]);
    assert_exit(&out, 0);

    let curve = fs::read_to_string(tmp.path().join("out/initial.curve")).unwrap();
    assert!(curve.starts_with("# imcf-curve n=2 t=0"), "header: {}", &curve[..40]);

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("out/admissibility.json")).unwrap())
            .unwrap();
    assert_eq!(report["admissible"], serde_json::Value::Bool(true));
    assert_eq!(report["star_shaped"], serde_json::Value::Bool(true));
    assert_eq!(report["bridge_empty"], serde_json::Value::Bool(true));
    assert!(stdout(&out).contains("admissible = true"));
}

#[test]
fn make_initial_tube_reports_not_star_shaped() {
    let tmp = tempdir().unwrap();
    let out = imcf(
        tmp.path(),
        &[
            "make-initial",
            "--tube-spheres",
            "--ell",
            "8",
            "--c",
            "0.6",
            "--n",
            "2",
            "--M",
            "600",
            "-o",
            "out",
        ],
    );
    assert_exit(&out, 0);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("out/admissibility.json")).unwrap())
            .unwrap();
    assert_eq!(report["admissible"], serde_json::Value::Bool(true));
    assert_eq!(report["star_shaped"], serde_json::Value::Bool(false));
    let ratio = report["ratio"].as_f64().unwrap();
    assert!((ratio - 5.0 / 3.0).abs() < 1e-2, "ratio {ratio}");
}

#[test]
fn make_initial_rejects_out_of_range_neck_radius() {
    let tmp = tempdir().unwrap();
    let out = imcf(
        tmp.path(),
        &["make-initial", "--tube-spheres", "--ell", "8", "--c", "1.2", "--n", "2", "-o", "out"],
    );
    assert_exit(&out, 1);
    assert!(stderr(&out).contains("invalid parameter"), "stderr: {}", stderr(&out));
    assert!(!tmp.path().join("out/initial.curve").exists());
}

#[test]
fn make_initial_requires_a_surface_kind() {
    let tmp = tempdir().unwrap();
    let out = imcf(tmp.path(), &["make-initial", "-o", "out"]);
    assert_exit(&out, 1);
    assert!(stderr(&out).contains("--sphere"), "stderr: {}", stderr(&out));
}

#[test]
fn make_initial_builds_from_a_profile_file() {
    let tmp = tempdir().unwrap();
    // Profile of the unit upper semicircle, coarse but strictly a graph.
    let mut profile = String::from("# x r\n");
    let k = 41;
    for j in 0..k {
        let x = -0.95 + 1.9 * (j as f64) / ((k - 1) as f64);
        let r = (1.0_f64 - x * x).sqrt();
        profile.push_str(&format!("{x} {r}\n"));
    }
    fs::write(tmp.path().join("profile.txt"), profile).unwrap();
    let out = imcf(
        tmp.path(),
        &["make-initial", "--graph", "profile.txt", "--n", "2", "--M", "200", "-o", "out"],
    );
    assert_exit(&out, 0);
    assert!(stdout(&out).contains("star-shaped = true"));
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

#[test]
fn simulate_writes_a_complete_trajectory_directory() {
    let tmp = tempdir().unwrap();
    let run = quick_sphere_run(tmp.path(), "96", "run");
    assert!(run.join("monitors.csv").exists());
    assert!(run.join("run_metadata.json").exists());
    let snaps = fs::read_dir(run.join("snapshots")).unwrap().count();
    assert_eq!(snaps, 5, "t ∈ {{0, 0.05, 0.1, 0.15, 0.2}}");

    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(run.join("run_metadata.json")).unwrap()).unwrap();
    assert_eq!(meta["termination"]["reason"], "reached-end");
    assert_eq!(meta["config"]["t_end"], serde_json::json!(0.2));
    assert!(meta["wall_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn simulate_exits_2_when_the_flow_stops_early() {
    let tmp = tempdir().unwrap();
    let out = imcf(tmp.path(), &["make-initial", "--sphere", "1", "--n", "2", "--M", "96", "-o", "init"]);
    assert_exit(&out, 0);
    let out = imcf(
        tmp.path(),
        &[
            "simulate",
            "--initial",
            "init/initial.curve",
            "-o",
            "run",
            "--t-end",
            "1",
            "--h-min-stop",
            "10",
        ],
    );
    assert_exit(&out, 2);
    assert!(stderr(&out).contains("degenerate speed"), "stderr: {}", stderr(&out));
    // The partial trajectory is still written for post-mortems.
    assert!(tmp.path().join("run/monitors.csv").exists());
}

#[test]
fn simulate_requires_an_initial_curve() {
    let tmp = tempdir().unwrap();
    let out = imcf(tmp.path(), &["simulate", "-o", "run"]);
    assert_exit(&out, 1);
    let out = imcf(tmp.path(), &["simulate", "--initial", "missing.curve", "-o", "run"]);
    assert_exit(&out, 1);
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[test]
fn verify_passes_a_sphere_run_and_writes_the_report() {
    let tmp = tempdir().unwrap();
    let run = quick_sphere_run(tmp.path(), "96", "run");
    let out = imcf(tmp.path(), &["verify", "run"]);
    assert_exit(&out, 0);

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(run.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["embeddedness"]["pass"], serde_json::Value::Bool(true));
    assert_eq!(report["area_growth"]["pass"], serde_json::Value::Bool(true));
    assert_eq!(report["bridge_gradient"]["status"], "not-applicable");
    assert!(stdout(&out).contains("embeddedness"));
}

#[test]
fn verify_exits_3_on_a_single_snapshot_trajectory() {
    let tmp = tempdir().unwrap();
    let out = imcf(tmp.path(), &["make-initial", "--sphere", "1", "--n", "2", "--M", "96", "-o", "init"]);
    assert_exit(&out, 0);
    // A one-snapshot trajectory, laid out by hand.
    fs::create_dir_all(tmp.path().join("stub/snapshots")).unwrap();
    fs::copy(
        tmp.path().join("init/initial.curve"),
        tmp.path().join("stub/snapshots/t=0.000000.curve"),
    )
    .unwrap();
    let out = imcf(tmp.path(), &["verify", "stub"]);
    assert_exit(&out, 3);
    assert!(stdout(&out).contains("skipped"), "stdout: {}", stdout(&out));
}

#[test]
fn verify_rejects_unknown_check_names() {
    let tmp = tempdir().unwrap();
    quick_sphere_run(tmp.path(), "96", "run");
    let out = imcf(tmp.path(), &["verify", "run", "--checks", "bogus"]);
    assert_exit(&out, 1);
    assert!(stderr(&out).contains("unknown check"), "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("width_bound"), "stderr lists the registry");
}

#[test]
fn verify_selects_checks_and_honors_output_path() {
    let tmp = tempdir().unwrap();
    quick_sphere_run(tmp.path(), "96", "run");
    let out = imcf(
        tmp.path(),
        &["verify", "run", "--checks", "area_growth,embeddedness", "-o", "sel.json"],
    );
    assert_exit(&out, 0);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("sel.json")).unwrap()).unwrap();
    let names: Vec<&String> = report.as_object().unwrap().keys().collect();
    assert_eq!(names, ["area_growth", "embeddedness"]);
}

#[test]
fn verify_measures_residual_orders_against_a_refined_run() {
    let tmp = tempdir().unwrap();
    // Resolutions below ~150 samples are pre-asymptotic for the gradient
    // equation (v and its derivatives grow toward the trimmed band's
    // edge), so the order measurement needs this much.
    let out = imcf(
        tmp.path(),
        &["make-initial", "--sphere", "1", "--n", "2", "--M", "200", "-o", "init"],
    );
    assert_exit(&out, 0);
    let out = imcf(
        tmp.path(),
        &[
            "simulate",
            "--initial",
            "init/initial.curve",
            "-o",
            "coarse",
            "--t-end",
            "0.1",
            "--snapshot-dt",
            "0.05",
        ],
    );
    assert_exit(&out, 0);
    let out = imcf(
        tmp.path(),
        &[
            "simulate",
            "--initial",
            "init/initial.curve",
            "-o",
            "fine",
            "--t-end",
            "0.1",
            "--snapshot-dt",
            "0.05",
            "--m",
            "400",
            "--sigma",
            "0.2",
        ],
    );
    assert_exit(&out, 0);
    let out = imcf(
        tmp.path(),
        &["verify", "coarse", "--refined", "fine", "--checks", "residuals"],
    );
    assert_exit(&out, 0);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("coarse/report.json")).unwrap())
            .unwrap();
    assert_eq!(report["residuals"]["pass"], serde_json::Value::Bool(true));
    let order = report["residuals"]["margin"].as_f64().unwrap() + 1.5;
    assert!(order >= 1.5, "measured order {order}");
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

#[test]
fn report_merges_monitor_series_with_prefixed_columns() {
    let tmp = tempdir().unwrap();
    quick_sphere_run(tmp.path(), "96", "alpha");
    let out = imcf(
        tmp.path(),
        &[
            "simulate",
            "--initial",
            "init/initial.curve",
            "-o",
            "beta",
            "--t-end",
            "0.1",
            "--snapshot-dt",
            "0.05",
        ],
    );
    assert_exit(&out, 0);

    let out = imcf(tmp.path(), &["report", "alpha", "beta", "-o", "wide.csv"]);
    assert_exit(&out, 0);
    let wide = fs::read_to_string(tmp.path().join("wide.csv")).unwrap();
    let mut lines = wide.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("t,alpha.minH,"), "header: {header}");
    assert!(header.contains(",beta.minH,"), "header: {header}");

    // alpha has 5 rows (t to 0.2), beta 3 (t to 0.1): the union is 5 rows,
    // and beta's cells are empty past t = 0.1.
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5, "union of times");
    let cols = header.split(',').count();
    assert!(rows.iter().all(|r| r.split(',').count() == cols), "ragged rows");
    let last = rows.last().unwrap();
    assert!(last.ends_with(",,,,,,,,,,,,"), "beta absent at t = 0.2: {last}");
}

#[test]
fn report_streams_to_stdout_by_default() {
    let tmp = tempdir().unwrap();
    quick_sphere_run(tmp.path(), "96", "run");
    let out = imcf(tmp.path(), &["report", "run"]);
    assert_exit(&out, 0);
    let text = stdout(&out);
    assert!(text.starts_with("t,run.minH,"), "got: {}", &text[..40.min(text.len())]);
    assert_eq!(text.lines().count(), 6, "header + 5 rows");
}

#[test]
fn report_rejects_a_directory_without_monitors() {
    let tmp = tempdir().unwrap();
    fs::create_dir(tmp.path().join("empty")).unwrap();
    let out = imcf(tmp.path(), &["report", "empty"]);
    assert_exit(&out, 1);
}

// ---------------------------------------------------------------------------
// config files
// ---------------------------------------------------------------------------

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let tmp = tempdir().unwrap();
    fs::write(
        tmp.path().join("spec.toml"),
        "n = 3\noutput = \"from-config\"\n\n[initial]\nkind = \"sphere\"\nradius = 2.0\nm = 48\n",
    )
    .unwrap();

    let out = imcf(tmp.path(), &["make-initial", "--config", "spec.toml"]);
    assert_exit(&out, 0);
    let header =
        fs::read_to_string(tmp.path().join("from-config/initial.curve")).unwrap();
    assert!(header.starts_with("# imcf-curve n=3"), "config n used");

    // The command line overrides both the dimension and the destination.
    let out = imcf(tmp.path(), &["make-initial", "--config", "spec.toml", "--n", "2", "-o", "cli"]);
    assert_exit(&out, 0);
    let header = fs::read_to_string(tmp.path().join("cli/initial.curve")).unwrap();
    assert!(header.starts_with("# imcf-curve n=2"), "flag beats config");
}

#[test]
fn config_file_rejects_unknown_keys() {
    let tmp = tempdir().unwrap();
    fs::write(tmp.path().join("spec.toml"), "walrus = true\n").unwrap();
    let out = imcf(tmp.path(), &["make-initial", "--config", "spec.toml", "--sphere", "1"]);
    assert_exit(&out, 1);
    assert!(stderr(&out).contains("unknown field"), "stderr: {}", stderr(&out));
}

#[test]
fn config_file_drives_a_whole_simulation() {
    let tmp = tempdir().unwrap();
    let out = imcf(tmp.path(), &["make-initial", "--sphere", "1", "--n", "2", "--M", "96", "-o", "init"]);
    assert_exit(&out, 0);
    fs::write(
        tmp.path().join("run.toml"),
        "output = \"run\"\n\n[initial]\npath = \"init/initial.curve\"\n\n\
         [flow]\nt_end = 0.1\nsnapshot_dt = 0.05\nscheme = \"midpoint\"\n",
    )
    .unwrap();
    let out = imcf(tmp.path(), &["simulate", "--config", "run.toml"]);
    assert_exit(&out, 0);
    let meta: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(tmp.path().join("run/run_metadata.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(meta["config"]["scheme"], "midpoint");
    assert_eq!(meta["config"]["t_end"], serde_json::json!(0.1));
}

// ---------------------------------------------------------------------------
// usage errors
// ---------------------------------------------------------------------------

#[test]
fn usage_errors_exit_1_and_help_exits_0() {
    let tmp = tempdir().unwrap();
    let out = imcf(tmp.path(), &["make-initial", "--no-such-flag"]);
    assert_exit(&out, 1);
    let out = imcf(tmp.path(), &["--help"]);
    assert_exit(&out, 0);
    assert!(stdout(&out).contains("make-initial"));
    let out = imcf(tmp.path(), &["make-initial", "--sphere", "1", "--tube-spheres"]);
    assert_exit(&out, 1);
    assert!(stderr(&out).contains("exactly one"), "stderr: {}", stderr(&out));
}
