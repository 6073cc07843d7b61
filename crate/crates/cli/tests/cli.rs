//! End-to-end checks of the binary: flag handling, exit codes, config-file
//! merging, and byte-stable output.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcrb"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hcrb_cli_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn help_exits_zero_and_bad_flags_exit_one() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["sweep", "--help"]).status.code(), Some(0));
    assert_eq!(run(&["sweep", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn sweep_emits_schema_header_and_one_row_per_step() {
    let text = stdout_of(&["sweep", "--steps", "5", "--g-max", "1"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# schema: bounds-sweep-v1");
    assert_eq!(
        lines[1],
        "g,cs_engine,ch_engine,ch_status,cs_paper,ch_paper,cf_paper,tr_finv_engine,tr_mse_mc"
    );
    assert_eq!(lines.len(), 2 + 5);
    // MC column stays empty in a plain sweep.
    assert!(lines[2].ends_with(','));
}

#[test]
fn sweep_json_carries_spec_and_records() {
    let text = stdout_of(&["sweep", "--steps", "3", "--format", "json", "--seed", "9"]);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["schema"], "bounds-sweep-v1");
    assert_eq!(doc["spec"]["seed"], 9);
    assert_eq!(doc["records"].as_array().unwrap().len(), 3);
    assert!(doc["records"][0]["cs_engine"].is_f64());
}

#[test]
fn config_file_supplies_flags_and_explicit_flags_win() {
    let path = scratch("sweep.json");
    std::fs::write(&path, r#"{"g-max": 1.0, "steps": 9, "scheme": "qq"}"#).unwrap();
    let cfgp = path.to_str().unwrap();

    let from_config = stdout_of(&["sweep", "--config", cfgp]);
    assert_eq!(from_config.lines().count(), 2 + 9);
    // qq alone is rank-deficient, so the Tr F^-1 field must be empty.
    assert!(from_config.lines().nth(2).unwrap().ends_with(",,"));
    let last = from_config.lines().last().unwrap();
    assert!(last.starts_with("1.0000000000000000e0,"));

    let with_flag = stdout_of(&["sweep", "--config", cfgp, "--steps", "3"]);
    assert_eq!(with_flag.lines().count(), 2 + 3);
}

#[test]
fn config_file_problems_map_to_usage_and_io_codes() {
    let path = scratch("bad.json");
    std::fs::write(&path, r#"{"stepz": 3}"#).unwrap();
    let out = run(&["sweep", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "unknown key should be a usage error");

    let missing = run(&["sweep", "--config", "/no/such/config.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn out_flag_writes_exactly_the_stdout_bytes() {
    let path = scratch("sweep_out.csv");
    let on_stdout = stdout_of(&["sweep", "--steps", "4"]);
    let out = run(&["sweep", "--steps", "4", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), on_stdout);
}

#[test]
fn unwritable_out_path_exits_two() {
    let out = run(&["sweep", "--steps", "2", "--out", "/nonexistent/dir/x.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_model_knobs_exit_one() {
    assert_eq!(run(&["sweep", "--kappa", "0.3"]).status.code(), Some(1));
    assert_eq!(run(&["sweep", "--steps", "0"]).status.code(), Some(1));
    assert_eq!(run(&["sweep", "--scheme", "telepathy"]).status.code(), Some(1));
    assert_eq!(run(&["mc", "--shots", "999"]).status.code(), Some(1));
}

#[test]
fn single_setting_two_channel_scheme_is_a_model_error() {
    let out = run(&["mc", "--shots", "2000", "--scheme", "squeezed"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("not jointly identifiable"), "stderr: {err}");
}

#[test]
fn mc_reports_estimation_and_bound_record_together() {
    let text = stdout_of(&["mc", "--shots", "1000", "--seed", "11", "--theta", "0.2,0,0,-0.1"]);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["estimation"]["shots"], 1000);
    assert_eq!(doc["estimation"]["seed"], 11);
    let tr_mse = doc["estimation"]["tr_mse"].as_f64().unwrap();
    assert_eq!(doc["bounds_record"]["tr_mse_mc"].as_f64().unwrap(), tr_mse);
    assert_eq!(doc["bounds_record"]["g"].as_f64().unwrap(), 0.0);
}

#[test]
fn json_only_and_csv_only_formats_are_enforced() {
    assert_eq!(run(&["reconcile", "--format", "csv"]).status.code(), Some(1));
    assert_eq!(run(&["mc", "--format", "csv"]).status.code(), Some(1));
    assert_eq!(run(&["phasespace", "--format", "json"]).status.code(), Some(1));
}

#[test]
fn phasespace_lists_both_modes_at_every_stage() {
    let text = stdout_of(&["phasespace", "--g", "0.5", "--theta", "0.4,0,0,0"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# schema: phasespace-v1");
    assert_eq!(lines[1], "stage,mode,center_q,center_p,semi_major,semi_minor,angle");
    assert_eq!(lines.len(), 2 + 8);
    for stage in ["input", "squeezed", "encoded", "output"] {
        assert_eq!(lines.iter().filter(|l| l.starts_with(stage)).count(), 2, "{stage}");
    }
}

#[test]
fn malformed_theta_exits_one() {
    assert_eq!(run(&["phasespace", "--theta", "1,2,3"]).status.code(), Some(1));
    assert_eq!(run(&["phasespace", "--theta", "a,b,c,d"]).status.code(), Some(1));
}

#[test]
fn mc_falls_back_to_the_sweep_start_for_g() {
    let text = stdout_of(&["mc", "--shots", "1000", "--g-min", "0.3", "--seed", "5"]);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["bounds_record"]["g"].as_f64().unwrap(), 0.3);
}
