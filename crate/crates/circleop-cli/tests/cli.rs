//! End-to-end checks of the binary: output formats, exit codes, and
//! run-to-run determinism.

use std::process::Command;

fn circleop(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_circleop"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn matrix_csv_has_the_expected_entry() {
    let out = circleop(&["matrix", "--alpha", "0:2;1:1", "--beta", "zbar", "--M", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "out_modes,-5,-4,-3,-2,-1,0,1,2,3,4,5");
    assert_eq!(lines[1], "in_modes,-4,-3,-2,-1,0,1,2,3,4");
    // Output mode 1 row, input mode 0 column: the a_1 coefficient.
    let row = lines[2 + 6]; // out modes start at -5
    let cells: Vec<&str> = row.split(',').collect();
    assert_eq!(cells[4], "1+0i");
}

#[test]
fn winding_subcommand_counts_roots() {
    let out = circleop(&["winding", "--symbol", "0:-0.5;1:1", "--at", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["winding"], 1);
    assert_eq!(doc["schema"], 1);
}

#[test]
fn norm_reports_the_opposite_case() {
    let out = circleop(&["norm", "--alpha", "one", "--beta", "z", "--M", "64", "--deg", "4"]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let sv = doc["svd_estimate"].as_f64().unwrap();
    assert!((sv - 2.0f64.sqrt()).abs() < 1e-6, "{sv}");
    assert_eq!(doc["case"], "unimodular-opposite");
    assert!((doc["ny_estimate"].as_f64().unwrap() - 2.0).abs() < 1e-2);
}

#[test]
fn parse_errors_exit_2_with_position() {
    let out = circleop(&["winding", "--symbol", "0:1;;1:2", "--at", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("position 4"), "{err}");
}

#[test]
fn unsettled_truncation_exits_3_after_reporting() {
    let out = circleop(&[
        "norm", "--alpha", "one", "--beta", "1:0.5;-1:0.5", "--M", "4", "--deg", "2",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let doc: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(doc["converged"], false);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let args = [
        "spectrum",
        "--alpha",
        "z",
        "--beta",
        "zbar",
        "--grid",
        "-1.5,1.5,-1.5,1.5,7",
        "--N",
        "512",
        "--probe",
        "16",
    ];
    let first = circleop(&args);
    let second = circleop(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let norm_args = ["norm", "--alpha", "one", "--beta", "z", "--seed", "7"];
    assert_eq!(circleop(&norm_args).stdout, circleop(&norm_args).stdout);
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = [
        "spectrum",
        "--alpha",
        "z",
        "--beta",
        "zbar",
        "--grid",
        "-1.5,1.5,-1.5,1.5,5",
        "--N",
        "512",
        "--probe",
        "16",
    ];
    let capped = Command::new(env!("CARGO_BIN_EXE_circleop"))
        .args(args)
        .env("CIRCLEOP_THREADS", "1")
        .output()
        .expect("binary runs");
    let free = circleop(&args);
    assert!(capped.status.success());
    assert_eq!(capped.stdout, free.stdout);
}

#[test]
fn spectrum_json_has_schema_and_points() {
    let out = circleop(&[
        "spectrum",
        "--alpha",
        "z",
        "--beta",
        "zbar",
        "--grid",
        "-1,1,-1,1,3",
        "--eps",
        "0.05",
        "--N",
        "512",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["points"].as_array().unwrap().len(), 9);
    // Center point (0,0) is inside the disk.
    let center = doc["points"]
        .as_array()
        .unwrap()
        .iter()
        .find(|p| p["re"] == 0.0 && p["im"] == 0.0)
        .unwrap();
    assert_eq!(center["in_spectrum"], true);
    assert_eq!(center["ind_a"], 1);
    assert_eq!(center["ind_b"], -1);
}

#[test]
fn spectrum_csv_classifies_the_disk() {
    let out = circleop(&[
        "spectrum",
        "--alpha",
        "z",
        "--beta",
        "zbar",
        "--grid",
        "-1.5,1.5,-1.5,1.5,7",
        "--eps",
        "0.05",
        "--N",
        "512",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "re,im,in_range_a,in_range_b,ind_a,ind_b,in_spectrum,min_sv"
    );
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        let re: f64 = cells[0].parse().unwrap();
        let im: f64 = cells[1].parse().unwrap();
        let in_spec: u8 = cells[6].parse().unwrap();
        let r = (re * re + im * im).sqrt();
        if r < 0.9 {
            assert_eq!(in_spec, 1, "{line}");
        }
        if r > 1.1 {
            assert_eq!(in_spec, 0, "{line}");
        }
    }
}

#[test]
fn subspace_and_kernel_reports() {
    let out = circleop(&[
        "subspace",
        "--phi-zeros",
        "0.5",
        "--psi-power",
        "1",
        "--M",
        "128",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(doc["invariance_residual"].as_f64().unwrap() <= 1e-10);
    assert_eq!(doc["reducing"], false);

    let out = circleop(&["kernel", "--alpha", "one", "--beta", "z", "--M", "16"]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(doc["count"], 1);
}

#[test]
fn selftest_passes_and_prints_the_table() {
    let out = circleop(&["selftest"]);
    assert!(out.status.success(), "selftest failed");
    let text = String::from_utf8(out.stdout).unwrap();
    let passes = text.lines().filter(|l| l.starts_with("[PASS]")).count();
    assert_eq!(passes, 14, "{text}");
    assert!(text.contains("14/14 criteria passed"));
}
