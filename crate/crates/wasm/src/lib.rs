//! Thin JSON-over-strings layer for the browser demo. Every export returns a
//! JSON document; failures come back as `{"error": "..."}` instead of a
//! thrown value so the page has a single decoding path.

use hcrb_core::bounds::{hcrb_pure, paper_reference_bounds, qfim_pure, sld_crb, HcrbOpts};
use hcrb_core::model::OrthonormalFrame;
use hcrb_core::report::{phasespace_rows, sweep_records, SweepSpec, PHASESPACE_SCHEMA, SWEEP_SCHEMA};
use hcrb_core::ModelConfig;
use wasm_bindgen::prelude::*;

fn error_json(err: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": err.to_string() }).to_string()
}

/// Bound curves over a squeezing range, for the sweep plot.
#[wasm_bindgen]
pub fn sweep_json(g_min: f64, g_max: f64, steps: u32, alpha: f64) -> String {
    let spec = SweepSpec { g_min, g_max, steps: steps as usize, alpha, ..SweepSpec::default() };
    match sweep_records(&spec) {
        Ok(records) => {
            serde_json::json!({ "schema": SWEEP_SCHEMA, "spec": spec, "records": records })
                .to_string()
        }
        Err(err) => error_json(err),
    }
}

/// 1-sigma covariance ellipses of both modes after every pipeline stage.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn phasespace_json(
    alpha: f64,
    g: f64,
    theta_g: f64,
    kappa: f64,
    t1: f64,
    t2: f64,
    t3: f64,
    t4: f64,
) -> String {
    let config = ModelConfig::new(alpha, g).with_theta_g(theta_g).with_kappa(kappa);
    match phasespace_rows(&config, &[t1, t2, t3, t4]) {
        Ok(rows) => {
            serde_json::json!({ "schema": PHASESPACE_SCHEMA, "rows": rows }).to_string()
        }
        Err(err) => error_json(err),
    }
}

/// Full solver detail at one operating point: both bounds, the reference
/// curves, the information matrix, and the solve diagnostics.
#[wasm_bindgen]
pub fn bound_detail_json(alpha: f64, g: f64, seed: u32) -> String {
    let inner = || -> hcrb_core::Result<serde_json::Value> {
        let frame = OrthonormalFrame::paper_frame(alpha, g)?;
        let qfim = qfim_pure(&frame);
        let cs = sld_crb(&qfim)?;
        let sol = hcrb_pure(&frame, &HcrbOpts { seed: seed as u64, ..HcrbOpts::default() })?;
        let paper = paper_reference_bounds(g);
        let qfim_rows: Vec<Vec<f64>> =
            (0..qfim.nrows()).map(|j| (0..qfim.ncols()).map(|k| qfim[(j, k)]).collect()).collect();
        Ok(serde_json::json!({
            "alpha": alpha,
            "g": g,
            "sld_crb": cs,
            "hcrb": sol.value,
            "qfim": qfim_rows,
            "reference": { "cs": paper.cs, "ch": paper.ch, "cf": paper.cf },
            "solution": sol.to_json(),
        }))
    };
    match inner() {
        Ok(doc) => doc.to_string(),
        Err(err) => error_json(err),
    }
}
