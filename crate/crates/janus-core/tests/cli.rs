//! End-to-end tests of the `janus` binary: output formats, exit codes,
//! determinism, and the environment override.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn janus() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_janus"));
    cmd.env_remove("JANUS_CUTOFF");
    cmd
}

fn run(args: &[&str]) -> Output {
    janus().args(args).output().expect("binary spawns")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn write_spec(dir: &Path, name: &str, body: Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(&body).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

/// χ|0.5, 0.4⟩-vs-|0.3, 2.0⟩ pair with a generic displacement.
fn generic_spec(dir: &Path) -> String {
    write_spec(
        dir,
        "generic.json",
        serde_json::json!({
            "chi_re": 0.8, "chi_im": 0.1,
            "eta_re": -0.5, "eta_im": 0.3,
            "r": 0.5, "theta": 0.4,
            "s": 0.3, "phi": 2.0,
            "alpha_re": 0.6, "alpha_im": -0.2,
        }),
    )
}

fn vacuum_spec(dir: &Path) -> String {
    write_spec(
        dir,
        "vacuum.json",
        serde_json::json!({
            "chi_re": 1.0, "chi_im": 0.0,
            "eta_re": 0.0, "eta_im": 0.0,
            "r": 0.0, "theta": 0.0,
            "s": 0.0, "phi": 0.0,
            "alpha_re": 0.0, "alpha_im": 0.0,
        }),
    )
}

fn deep_spec(dir: &Path) -> String {
    write_spec(
        dir,
        "deep.json",
        serde_json::json!({
            "chi_re": 1.0, "chi_im": 0.0,
            "eta_re": -1.0, "eta_im": 0.0,
            "r": 1.3, "theta": 0.0,
            "s": 1.3, "phi": std::f64::consts::PI,
            "alpha_re": 1.0, "alpha_im": 0.0,
        }),
    )
}

#[test]
fn gsp_table_matches_golden_bytes() {
    let out = run(&["gsp", "table", "--max", "4"]);
    assert!(out.status.success());
    let golden = "\
# janus gsp table
# max = 4
p,q,coeffs
0,0,1
0,2,1
0,4,3
1,1,0;1
1,3,0;3
2,0,0;1
2,2,0;1;2
2,4,0;3;12
3,1,0;0;3
3,3,0;0;9;6
4,0,0;0;3
4,2,0;0;3;12
4,4,0;0;9;72;24
";
    assert_eq!(stdout_of(&out), golden);

    let bare = run(&["gsp", "table", "--max", "4", "--no-meta"]);
    assert_eq!(stdout_of(&bare), golden.lines().skip(2).fold(String::new(), |mut acc, l| {
        acc.push_str(l);
        acc.push('\n');
        acc
    }));
}

#[test]
fn selftest_passes_and_is_byte_stable() {
    let first = run(&["selftest"]);
    assert!(first.status.success(), "{}", stdout_of(&first));
    let text = stdout_of(&first);
    assert!(text.ends_with("selftest: PASS\n"), "{text}");
    let second = run(&["selftest"]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn moments_agree_with_inline_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let spec = generic_spec(dir.path());
    let out = run(&["moments", "--spec", &spec, "--k", "3", "--oracle"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["k"], 3);
    assert!(v["abs_diff"].as_f64().unwrap() < 1e-8);
    assert!(v["branch_residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn dump_spec_round_trips_through_gk() {
    let dir = tempfile::tempdir().unwrap();
    let spec = generic_spec(dir.path());
    let out = run(&["gk", "--spec", &spec, "--k", "2", "--dump-spec"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let value = v["value"].as_f64().unwrap();

    let echoed = write_spec(dir.path(), "echoed.json", v["spec"].clone());
    let again = run(&["gk", "--spec", &echoed, "--k", "2"]);
    assert!(again.status.success());
    let v2: Value = serde_json::from_str(&stdout_of(&again)).unwrap();
    // Renormalizing an already-normalized spec may wiggle the last ulp.
    let value2 = v2["value"].as_f64().unwrap();
    assert!((value - value2).abs() <= 1e-12 * value.abs());
}

#[test]
fn out_flag_writes_the_payload_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = generic_spec(dir.path());
    let target = dir.path().join("result.json");
    let piped = run(&["gk", "--spec", &spec, "--k", "2"]);
    let filed = run(&[
        "gk",
        "--spec",
        &spec,
        "--k",
        "2",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert!(filed.status.success());
    assert!(filed.stdout.is_empty());
    assert_eq!(std::fs::read(&target).unwrap(), piped.stdout);
}

#[test]
fn wigner_summary_reports_unit_mass() {
    let dir = tempfile::tempdir().unwrap();
    let spec = generic_spec(dir.path());
    let out = run(&["wigner", "--spec", &spec]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let meta = |key: &str| -> f64 {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("# {key} = ")))
            .expect("meta line present")
            .parse()
            .unwrap()
    };
    let per_side = (2.0 * meta("extent") / meta("step")).round() as usize + 1;
    let summary_line = text
        .lines()
        .find(|l| l.starts_with("# summary "))
        .expect("summary line present");
    let v: Value = serde_json::from_str(&summary_line["# summary ".len()..]).unwrap();
    assert!((v["integral"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!(v["negativity_volume"].as_f64().unwrap() >= -1e-9);
    let data = text.lines().filter(|l| !l.starts_with('#') && *l != "q,p,w").count();
    assert_eq!(data, per_side * per_side);
}

#[test]
fn wigner_decompose_emits_three_sections() {
    let dir = tempfile::tempdir().unwrap();
    let spec = generic_spec(dir.path());
    let out = run(&[
        "wigner", "--spec", &spec, "--extent", "7.0", "--step", "0.5", "--decompose", "--no-meta",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    for part in ["# part: mixture", "# part: interference", "# part: total"] {
        assert!(text.contains(part), "missing {part}");
    }
    assert!(!text.contains("# janus wigner"), "--no-meta leaves meta lines");

    // A window that clips real probability mass is rejected, not silently
    // integrated.
    let clipped = run(&["wigner", "--spec", &spec, "--extent", "3.0", "--step", "0.5"]);
    assert_eq!(clipped.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&clipped.stderr).contains("grid too coarse"));
}

#[test]
fn qfi_gsq_on_vacuum_is_two() {
    let dir = tempfile::tempdir().unwrap();
    let spec = vacuum_spec(dir.path());
    let out = run(&["qfi", "--spec", &spec, "--parameter", "gsq"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["parameter"], "squeezing_generator");
    assert!((v["value"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn qfi_numeric_matches_formula() {
    let dir = tempfile::tempdir().unwrap();
    let spec = generic_spec(dir.path());
    let formula = run(&["qfi", "--spec", &spec, "--parameter", "dphase"]);
    let numeric = run(&[
        "qfi", "--spec", &spec, "--parameter", "dphase", "--numeric", "--dl", "1e-3",
    ]);
    assert!(formula.status.success() && numeric.status.success());
    let f: Value = serde_json::from_str(&stdout_of(&formula)).unwrap();
    let n: Value = serde_json::from_str(&stdout_of(&numeric)).unwrap();
    assert_eq!(f["method"], "variance_formula");
    assert_eq!(n["method"], "fidelity_numeric");
    let (fv, nv) = (f["value"].as_f64().unwrap(), n["value"].as_f64().unwrap());
    assert!((fv - nv).abs() <= 1e-3 * fv.abs().max(1.0));
    assert!(n["sensitivity"].as_f64().unwrap() >= 0.0);
}

#[test]
fn scan_is_deterministic_and_counts_failed_cells() {
    let dir = tempfile::tempdir().unwrap();
    let vacuum = vacuum_spec(dir.path());
    // alpha_mag = 0 on the single-component family is the vacuum: that cell
    // cannot define g² and must come back as NaN, not abort the sweep.
    let args = [
        "scan",
        "--quantity",
        "gk:2",
        "--axis1",
        "alpha_mag:0:1:3",
        "--spec",
        vacuum.as_str(),
    ];
    let first = run(&args);
    assert!(first.status.success());
    let text = stdout_of(&first);
    assert!(text.contains("alpha_mag,gk:2"), "{text}");
    assert!(text.contains("0,NaN"), "{text}");
    assert!(text.trim_end().ends_with("# warnings: 1"), "{text}");
    // Coherent cells are exactly Poissonian.
    let g2_line = text.lines().find(|l| l.starts_with("1,")).unwrap();
    let g2: f64 = g2_line.split(',').nth(1).unwrap().parse().unwrap();
    assert!((g2 - 1.0).abs() < 1e-12);

    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn two_axis_scan_has_full_cartesian_rows() {
    let out = run(&[
        "scan",
        "--quantity",
        "moment:1",
        "--axis1",
        "r:0.1:0.5:3",
        "--axis2",
        "weight_ratio:0.5:2:4",
        "--no-meta",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,weight_ratio,moment:1"));
    let data: Vec<&str> = lines.filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 3 * 4);
    assert!(text.trim_end().ends_with("# warnings: 0"));
}

#[test]
fn cutoff_override_is_honored_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let spec = deep_spec(dir.path());
    // Forced far too small: the tail audit must reject rather than grow.
    let starved = janus()
        .env("JANUS_CUTOFF", "40")
        .args(["moments", "--spec", &spec, "--k", "2", "--oracle"])
        .output()
        .unwrap();
    assert_eq!(starved.status.code(), Some(2), "{}", stdout_of(&starved));
    assert!(String::from_utf8_lossy(&starved.stderr).contains("cutoff"));

    let roomy = janus()
        .env("JANUS_CUTOFF", "600")
        .args(["moments", "--spec", &spec, "--k", "2", "--oracle"])
        .output()
        .unwrap();
    assert_eq!(roomy.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout_of(&roomy)).unwrap();
    assert!(v["abs_diff"].as_f64().unwrap() < 1e-8);
}

#[test]
fn usage_errors_exit_one_compute_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    // Unknown flag.
    assert_eq!(run(&["gsp", "table", "--bogus"]).status.code(), Some(1));
    // Missing spec file.
    assert_eq!(
        run(&["gk", "--spec", "/nonexistent/spec.json", "--k", "2"]).status.code(),
        Some(1)
    );
    // Oracle flag where no oracle exists.
    assert_eq!(run(&["gsp", "table", "--oracle"]).status.code(), Some(1));
    // Malformed axis.
    assert_eq!(
        run(&["scan", "--quantity", "gk:2", "--axis1", "r:0:1"]).status.code(),
        Some(1)
    );
    // g² of the vacuum is a compute error, not a usage error.
    let vacuum = vacuum_spec(dir.path());
    let out = run(&["gk", "--spec", &vacuum, "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mean photon number"));
    // Help is not an error.
    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout_of(&help).contains("Photon statistics"));
}
