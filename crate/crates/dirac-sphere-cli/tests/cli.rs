//! End-to-end tests of the command-line binary: report shapes, exit codes,
//! byte-for-byte determinism, and the guarantee that nonzero exits produce
//! no partial output on stdout.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirac-sphere"))
        .args(args)
        .output()
        .expect("binary executes")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exits normally")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout_str(out)).expect("stdout is valid JSON")
}

/// Unique scratch path per test, safe under parallel execution.
fn tmp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("dirac-sphere-cli-{}-{name}", std::process::id()))
}

const SHEAR_CURVE: &str = "1+e,1-e,1/((1+e)(1-e))";

#[test]
fn spectrum_round_sphere_matches_closed_values() {
    let out = run(&["spectrum", "--a", "1,1,1", "--n-max", "1"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_str(&out));
    let v = json(&out);
    assert_eq!(v["total_multiplicity"], 10);
    assert_eq!(v["params"]["exact"], serde_json::json!(["1", "1", "1"]));
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 3);
    let close = |x: &serde_json::Value, want: f64| (x.as_f64().unwrap() - want).abs() < 1e-10;
    assert!(close(&entries[0]["eigenvalue"], -1.5));
    assert_eq!(entries[0]["multiplicity"], 2);
    assert!(close(&entries[1]["eigenvalue"], 1.5));
    assert_eq!(entries[1]["multiplicity"], 2);
    assert!(close(&entries[2]["eigenvalue"], 2.5));
    assert_eq!(entries[2]["multiplicity"], 6);
}

#[test]
fn spectrum_csv_lists_one_row_per_cluster() {
    let out = run(&["spectrum", "--a", "1,1,1", "--n-max", "1", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "eigenvalue,multiplicity,degree");
    assert_eq!(lines.len(), 4, "header plus three clusters:\n{text}");
}

#[test]
fn spectrum_rejects_bad_parameters_without_output() {
    for bad in ["0,1,1", "1,2", "x,y,z", "1,1,-3/2"] {
        let out = run(&["spectrum", "--a", bad]);
        assert_eq!(code(&out), 2, "--a {bad}");
        assert!(stdout_str(&out).is_empty(), "no partial output for --a {bad}");
        assert!(stderr_str(&out).starts_with("error:"), "--a {bad}");
    }
}

#[test]
fn charpoly_convention_toggles_degree_three_agreement() {
    let printed = run(&["charpoly", "--a", "1,1,1", "--degree", "3", "--convention", "printed"]);
    assert_eq!(code(&printed), 0);
    assert_eq!(json(&printed)["agrees"], false);

    let corrected = run(&["charpoly", "--a", "1,1,1", "--degree", "3", "--convention", "corrected"]);
    assert_eq!(code(&corrected), 0);
    let v = json(&corrected);
    assert_eq!(v["agrees"], true);
    assert_eq!(v["convention"], "corrected");
    assert_eq!(v["exact"]["degree"], 32);

    let low = run(&["charpoly", "--a", "3/2,5/4,1/2", "--degree", "2"]);
    assert_eq!(code(&low), 0);
    assert_eq!(json(&low)["agrees"], true);
}

#[test]
fn charpoly_csv_ends_with_agreement_row() {
    let out = run(&["charpoly", "--a", "1,1,1", "--degree", "1", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout_str(&out);
    assert!(text.starts_with("power,exact,formula\n"));
    assert!(text.ends_with("agrees,true,\n"), "{text}");
}

#[test]
fn charpoly_rejects_degrees_without_closed_forms() {
    let out = run(&["charpoly", "--a", "1,1,1", "--degree", "5"]);
    assert_eq!(code(&out), 2);
    assert!(stdout_str(&out).is_empty());
}

#[test]
fn verify_identities_suite_passes() {
    let out = run(&["verify", "--suite", "identities", "--seed", "1"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_str(&out));
    let v = json(&out);
    assert_eq!(v["verdict"], "pass");
    let checks = v["reports"][0]["checks"].as_array().unwrap();
    assert!(checks.len() >= 10);
    assert!(checks.iter().all(|c| c["status"] == "pass"));
}

#[test]
fn verify_charpoly_suite_reports_documented_disagreement() {
    let out = run(&["verify", "--suite", "charpoly", "--convention", "printed"]);
    assert_eq!(code(&out), 0, "a documented disagreement is not a failure");
    let v = json(&out);
    assert_eq!(v["verdict"], "disagreement-reported");
    let checks = v["reports"][0]["checks"].as_array().unwrap();
    assert!(
        checks.iter().any(|c| c["status"] == "disagreement-reported"),
        "at least one check carries the disagreement status"
    );

    // The full run inherits the verdict from the charpoly suite.
    let all = run(&["verify"]);
    assert_eq!(code(&all), 0);
    assert_eq!(json(&all)["verdict"], "disagreement-reported");
}

#[test]
fn verify_csv_merges_suites_under_one_header() {
    let out = run(&["verify", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "suite,check,status");
    assert_eq!(
        lines.iter().filter(|l| **l == "suite,check,status").count(),
        1,
        "single header"
    );
    assert!(lines.iter().any(|l| l.starts_with("identities,")));
    assert!(lines.iter().any(|l| l.starts_with("charpoly,")));
}

#[test]
fn verify_rejects_unsupported_degree_without_output() {
    let out = run(&["verify", "--suite", "charpoly", "--degree", "5"]);
    assert_eq!(code(&out), 2);
    assert!(stdout_str(&out).is_empty());
    assert!(stderr_str(&out).starts_with("error:"));
}

fn write_tensor(name: &str, body: &str) -> PathBuf {
    let path = tmp_path(name);
    fs::write(&path, body).expect("scratch file writes");
    path
}

#[test]
fn perturb_shear_tensor_reports_both_orders() {
    let path = write_tensor(
        "shear.json",
        r#"{"frame": "+", "entries": [["2","0","0"],["0","-2","0"],["0","0","0"]]}"#,
    );
    let out = run(&["perturb", "--h-file", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_str(&out));
    let v = json(&out);
    assert_eq!(v["lambda1"]["plus"]["exact"], "0");
    assert_eq!(v["lambda1"]["minus"]["exact"], "0");
    assert_eq!(v["lambda2"]["plus"]["exact"], "2");
    assert_eq!(v["lambda2"]["minus"]["exact"], "1");
    assert_eq!(v["note"], serde_json::Value::Null);
    let _ = fs::remove_file(path);
}

#[test]
fn perturb_non_shear_tensor_gets_first_order_and_note() {
    let path = write_tensor(
        "conformal.json",
        r#"{"frame": "+", "entries": [["2","0","0"],["0","0","0"],["0","0","0"]]}"#,
    );
    let out = run(&["perturb", "--h-file", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["lambda1"]["plus"]["exact"], "-1/2");
    assert_eq!(v["lambda1"]["minus"]["exact"], "1/2");
    assert_eq!(v["lambda2"], serde_json::Value::Null);
    assert_eq!(
        v["note"],
        "non-shear: second order unavailable (Theorem 2 hypothesis)"
    );
    let _ = fs::remove_file(path);
}

#[test]
fn perturb_minus_frame_input_limits_second_order_to_that_branch() {
    let path = write_tensor(
        "minus.json",
        r#"{"frame": "-", "entries": [["2","0","0"],["0","-2","0"],["0","0","0"]]}"#,
    );
    let out = run(&["perturb", "--h-file", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["lambda2"]["plus"], serde_json::Value::Null);
    // Constant minus-frame components: every derivative term vanishes and
    // the mean of -(1/4)|h|² is -2.
    assert_eq!(v["lambda2"]["minus"]["exact"], "-2");
    assert_eq!(
        v["note"],
        "minus-frame input: plus-branch second order requires the plus-frame tensor"
    );
    let _ = fs::remove_file(path);
}

#[test]
fn perturb_zero_tensor_is_all_zeros() {
    let path = write_tensor(
        "zero.json",
        r#"{"frame": "+", "entries": [["0","0","0"],["0","0","0"],["0","0","0"]]}"#,
    );
    let out = run(&["perturb", "--h-file", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["lambda1"]["plus"]["exact"], "0");
    assert_eq!(v["lambda2"]["plus"]["exact"], "0");
    assert_eq!(v["lambda2"]["minus"]["exact"], "0");
    let _ = fs::remove_file(path);
}

#[test]
fn perturb_error_paths_exit_two_without_output() {
    let missing = run(&["perturb", "--h-file", "/definitely/not/here.json"]);
    assert_eq!(code(&missing), 2);
    assert!(stdout_str(&missing).is_empty());

    let garbled = write_tensor("garbled.json", "{not json");
    let out = run(&["perturb", "--h-file", garbled.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stdout_str(&out).is_empty());
    let _ = fs::remove_file(garbled);

    let asymmetric = write_tensor(
        "asymmetric.json",
        r#"{"frame": "+", "entries": [["0","1","0"],["2","0","0"],["0","0","0"]]}"#,
    );
    let out = run(&["perturb", "--h-file", asymmetric.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stdout_str(&out).is_empty());
    let _ = fs::remove_file(asymmetric);
}

#[test]
fn sweep_recovers_curve_coefficients() {
    let out = run(&["sweep", "--curve", SHEAR_CURVE, "--n-max", "1"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_str(&out));
    let v = json(&out);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["curve"], SHEAR_CURVE);
    assert_eq!(v["rows"].as_array().unwrap().len(), 7, "six ε plus ε = 0");
    let fits = v["fits"].as_array().unwrap();
    assert_eq!(fits.len(), 4);
    for fit in fits {
        assert_eq!(fit["pass"], true);
        let analytic = &fit["analytic"]["exact"];
        match (fit["branch"].as_str().unwrap(), fit["order"].as_u64().unwrap()) {
            ("plus", 1) | ("minus", 1) => assert_eq!(analytic, "0"),
            ("plus", 2) => assert_eq!(analytic, "2"),
            ("minus", 2) => assert_eq!(analytic, "1"),
            other => panic!("unexpected fit {other:?}"),
        }
    }
}

#[test]
fn sweep_csv_carries_fit_rows() {
    let out = run(&["sweep", "--curve", SHEAR_CURVE, "--n-max", "1", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout_str(&out);
    assert!(text.starts_with("eps,lambda_plus,lambda_minus,fitted_order,analytic,residual\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("fit-plus,")).count(), 2);
    assert_eq!(text.lines().filter(|l| l.starts_with("fit-minus,")).count(), 2);
}

#[test]
fn sweep_rejects_bad_grids_without_output() {
    // Outside the certified |ε| ≤ 1/10 window.
    let wide = run(&["sweep", "--curve", SHEAR_CURVE, "--eps", "0.2,-0.2"]);
    assert_eq!(code(&wide), 2);
    assert!(stdout_str(&wide).is_empty());

    // Missing the mirror of +0.01.
    let lopsided = run(&["sweep", "--curve", SHEAR_CURVE, "--eps", "0.01"]);
    assert_eq!(code(&lopsided), 2);
    assert!(stdout_str(&lopsided).is_empty());

    // A curve that does not start at the round sphere.
    let off = run(&["sweep", "--curve", "2+e,1-e,1"]);
    assert_eq!(code(&off), 2);
    assert!(stdout_str(&off).is_empty());
}

#[test]
fn identical_invocations_are_byte_identical() {
    let cases: [&[&str]; 3] = [
        &["verify", "--suite", "identities", "--seed", "3"],
        &["charpoly", "--a", "3/2,5/4,1/2", "--degree", "2"],
        &["sweep", "--curve", SHEAR_CURVE, "--n-max", "1"],
    ];
    for args in cases {
        let first = run(args);
        let second = run(args);
        assert_eq!(code(&first), 0);
        assert_eq!(code(&second), 0);
        assert_eq!(first.stdout, second.stdout, "args: {args:?}");
    }
}

#[test]
fn out_flag_redirects_the_whole_report() {
    let direct = run(&["spectrum", "--a", "1,1,1", "--n-max", "1"]);
    assert_eq!(code(&direct), 0);

    let path = tmp_path("spectrum.json");
    let redirected = run(&[
        "spectrum",
        "--a",
        "1,1,1",
        "--n-max",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&redirected), 0);
    assert!(stdout_str(&redirected).is_empty(), "nothing on stdout with --out");
    let written = fs::read_to_string(&path).expect("report file exists");
    assert_eq!(written, stdout_str(&direct));
    let _ = fs::remove_file(path);
}

#[test]
fn unwritable_out_path_is_invalid_input() {
    let out = run(&[
        "spectrum",
        "--a",
        "1,1,1",
        "--n-max",
        "1",
        "--out",
        "/no-such-directory/report.json",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stdout_str(&out).is_empty());
    assert!(stderr_str(&out).starts_with("error:"));
}

#[test]
fn argument_errors_exit_two() {
    let unknown_flag = run(&["spectrum", "--a", "1,1,1", "--frequency", "9"]);
    assert_eq!(code(&unknown_flag), 2);

    let unknown_command = run(&["integrate"]);
    assert_eq!(code(&unknown_command), 2);

    let bad_convention = run(&["charpoly", "--a", "1,1,1", "--degree", "3", "--convention", "folklore"]);
    assert_eq!(code(&bad_convention), 2);
}

#[test]
fn help_lists_all_commands() {
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
    let text = stdout_str(&out);
    for command in ["spectrum", "charpoly", "verify", "perturb", "sweep"] {
        assert!(text.contains(command), "help mentions {command}");
    }
}
