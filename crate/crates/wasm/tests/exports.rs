//! The bindings are plain functions on the host, so the JSON contract is
//! testable without a browser.

use hcrb_wasm::{bound_detail_json, phasespace_json, sweep_json};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).expect("export should emit valid JSON")
}

#[test]
fn sweep_export_carries_schema_and_rows() {
    let doc = parse(&sweep_json(0.0, 2.0, 5, 1.0));
    assert_eq!(doc["schema"], "bounds-sweep-v1");
    let records = doc["records"].as_array().unwrap();
    assert_eq!(records.len(), 5);
    assert!((records[0]["cs_paper"].as_f64().unwrap() - 4.0).abs() < 1e-12);
    assert!((records[0]["ch_paper"].as_f64().unwrap() - 8.0).abs() < 1e-12);
}

#[test]
fn sweep_export_reports_bad_requests_inline() {
    let doc = parse(&sweep_json(0.0, 2.0, 0, 1.0));
    assert!(doc["error"].as_str().unwrap().contains("step"));
}

#[test]
fn phasespace_export_lists_both_modes_at_every_stage() {
    let doc = parse(&phasespace_json(1.0, 0.5, 0.0, 0.5, 0.3, -0.2, 0.1, 0.0));
    assert_eq!(doc["schema"], "phasespace-v1");
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for stage in ["input", "squeezed", "encoded", "output"] {
        let n = rows.iter().filter(|r| r["stage"] == stage).count();
        assert_eq!(n, 2, "expected two modes at stage {stage}");
    }
    for r in rows {
        assert!(r["semi_major"].as_f64().unwrap() >= r["semi_minor"].as_f64().unwrap());
    }
}

#[test]
fn phasespace_export_rejects_unsupported_gains() {
    let doc = parse(&phasespace_json(1.0, 0.5, 0.0, 0.3, 0.0, 0.0, 0.0, 0.0));
    assert!(doc["error"].is_string());
}

#[test]
fn detail_export_matches_the_closed_form() {
    let g = 0.3;
    let doc = parse(&bound_detail_json(1.0, g, 7));
    let hcrb = doc["hcrb"].as_f64().unwrap();
    let cs = doc["sld_crb"].as_f64().unwrap();
    assert!((hcrb - (4.0 * (2.0 * g).cosh() + 4.0)).abs() < 1e-9);
    assert!((cs - 4.0 * (2.0 * g).cosh()).abs() < 1e-9);
    assert_eq!(doc["solution"]["status"], "exact");
    let qfim = doc["qfim"].as_array().unwrap();
    assert_eq!(qfim.len(), 4);
}

#[test]
fn exports_are_deterministic() {
    assert_eq!(sweep_json(0.0, 1.0, 11, 1.0), sweep_json(0.0, 1.0, 11, 1.0));
    assert_eq!(bound_detail_json(1.0, 0.5, 3), bound_detail_json(1.0, 0.5, 3));
}
