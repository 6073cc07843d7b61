//! Deterministic report assembly: bound sweeps, the convention-reconciliation
//! report, and phase-space snapshots, plus the CSV/JSON renderings used by
//! the CLI.
//!
//! Every float written to CSV uses 17 significant digits so reruns are
//! byte-identical.

use crate::bounds::{hcrb_pure, paper_reference_bounds, qfim_pure, sld_crb, HcrbOpts};
use crate::error::{Error, Result};
use crate::gaussian::{homodyne_outcome_model, propagate_pipeline, DualHomodyneScheme};
use crate::measurement::{fisher_information, splitmix64, tr_inverse};
use crate::model::{gaussian_gram, orthonormalize, paper_gram, OrthonormalFrame, PureModelGram, DEFAULT_RANK_TOL};
use crate::{ModelConfig, ALLOWED_GAINS};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

pub const SWEEP_SCHEMA: &str = "bounds-sweep-v1";
pub const PHASESPACE_SCHEMA: &str = "phasespace-v1";
pub const RECONCILE_SCHEMA: &str = "reconcile-v1";

/// Relative deviation below which two values count as matching.
pub const MATCH_TOL_REL: f64 = 1e-6;
/// Relative deviation below which a comparison is a partial match.
pub const PARTIAL_TOL_REL: f64 = 1e-2;

/// Squeezing values the reconciliation report samples by default.
pub const RECONCILE_G_VALUES: [f64; 4] = [0.0, 0.25, 0.5, 1.0];

pub fn match_status(rel_dev: f64) -> &'static str {
    if rel_dev < MATCH_TOL_REL {
        "match"
    } else if rel_dev < PARTIAL_TOL_REL {
        "partial"
    } else {
        "mismatch"
    }
}

/// 17 significant digits, with negative zero normalized so reruns and
/// platforms agree byte-for-byte.
pub fn format_float(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

/// One sweep row: engine bounds next to the quoted closed forms, plus the
/// measurement-side numbers when available.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundsRecord {
    pub g: f64,
    pub cs_engine: f64,
    pub ch_engine: f64,
    pub ch_status: String,
    pub cs_paper: f64,
    pub ch_paper: f64,
    pub cf_paper: f64,
    pub tr_finv_engine: Option<f64>,
    pub tr_mse_mc: Option<f64>,
}

pub const BOUNDS_COLUMNS: [&str; 9] = [
    "g",
    "cs_engine",
    "ch_engine",
    "ch_status",
    "cs_paper",
    "ch_paper",
    "cf_paper",
    "tr_finv_engine",
    "tr_mse_mc",
];

/// Engine and reference bounds at one configuration. The coefficient-expansion
/// frame is the canonical model here; `tr_mse_mc` is passed through from a
/// Monte Carlo run when one happened.
pub fn bound_comparison(
    config: &ModelConfig,
    scheme: &DualHomodyneScheme,
    seed: u64,
    tr_mse_mc: Option<f64>,
) -> Result<BoundsRecord> {
    config.validate()?;
    let frame = OrthonormalFrame::paper_frame(config.alpha, config.g)?;
    let cs_engine = sld_crb(&qfim_pure(&frame))?;
    let sol = hcrb_pure(&frame, &HcrbOpts { seed, ..HcrbOpts::default() })?;
    let model = homodyne_outcome_model(config, scheme)?;
    let tr_finv_engine = tr_inverse(&fisher_information(&model));
    let paper = paper_reference_bounds(config.g);
    Ok(BoundsRecord {
        g: config.g,
        cs_engine,
        ch_engine: sol.value,
        ch_status: sol.status.as_str().to_string(),
        cs_paper: paper.cs,
        ch_paper: paper.ch,
        cf_paper: paper.cf,
        tr_finv_engine,
        tr_mse_mc,
    })
}

/// Sweep request over the squeezing strength.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSpec {
    pub g_min: f64,
    pub g_max: f64,
    pub steps: usize,
    pub alpha: f64,
    pub theta_g: f64,
    pub kappa: f64,
    pub scheme: String,
    pub seed: u64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            g_min: 0.0,
            g_max: 2.0,
            steps: 41,
            alpha: 1.0,
            theta_g: FRAC_PI_2,
            kappa: 0.5,
            scheme: "heterodyne".into(),
            seed: 1,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.g_min.is_finite() || !self.g_max.is_finite() || self.g_min < 0.0 {
            return Err(Error::invalid("sweep", format!("g range [{}, {}]", self.g_min, self.g_max)));
        }
        if self.g_min > self.g_max {
            return Err(Error::invalid("sweep", "g_min must not exceed g_max"));
        }
        if self.steps < 1 {
            return Err(Error::invalid("sweep", "need at least one step"));
        }
        Ok(())
    }

    pub fn g_at(&self, i: usize) -> f64 {
        if self.steps <= 1 {
            self.g_min
        } else {
            self.g_min + (self.g_max - self.g_min) * i as f64 / (self.steps - 1) as f64
        }
    }
}

/// Rows of the bound sweep, in g order. Deterministic for a fixed spec.
pub fn sweep_records(spec: &SweepSpec) -> Result<Vec<BoundsRecord>> {
    spec.validate()?;
    let scheme = DualHomodyneScheme::from_id(&spec.scheme)?;
    let mut rows = Vec::with_capacity(spec.steps);
    for i in 0..spec.steps {
        let config = ModelConfig::new(spec.alpha, spec.g_at(i))
            .with_theta_g(spec.theta_g)
            .with_kappa(spec.kappa);
        let row_seed = splitmix64(spec.seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        rows.push(bound_comparison(&config, &scheme, row_seed, None)?);
    }
    Ok(rows)
}

pub fn bounds_csv(records: &[BoundsRecord]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# schema: {SWEEP_SCHEMA}");
    let _ = writeln!(out, "{}", BOUNDS_COLUMNS.join(","));
    for r in records {
        let opt = |v: Option<f64>| v.map(format_float).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            format_float(r.g),
            format_float(r.cs_engine),
            format_float(r.ch_engine),
            r.ch_status,
            format_float(r.cs_paper),
            format_float(r.ch_paper),
            format_float(r.cf_paper),
            opt(r.tr_finv_engine),
            opt(r.tr_mse_mc),
        );
    }
    out
}

/// One covariance-ellipse row of the phase-space export.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EllipseRow {
    pub stage: String,
    pub mode: usize,
    pub center_q: f64,
    pub center_p: f64,
    pub semi_major: f64,
    pub semi_minor: f64,
    pub angle: f64,
}

/// 1-sigma ellipses of both modes after every stage of the chain.
pub fn phasespace_rows(config: &ModelConfig, theta: &[f64; 4]) -> Result<Vec<EllipseRow>> {
    let stages = propagate_pipeline(config, theta)?;
    let mut rows = Vec::with_capacity(8);
    for (stage, state) in stages.stages() {
        for mode in 0..state.n_modes() {
            let e = state.ellipse(mode);
            rows.push(EllipseRow {
                stage: stage.to_string(),
                mode,
                center_q: e.center_q,
                center_p: e.center_p,
                semi_major: e.semi_major,
                semi_minor: e.semi_minor,
                angle: e.angle,
            });
        }
    }
    Ok(rows)
}

pub fn phasespace_csv(rows: &[EllipseRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# schema: {PHASESPACE_SCHEMA}");
    let _ = writeln!(out, "stage,mode,center_q,center_p,semi_major,semi_minor,angle");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.stage,
            r.mode,
            format_float(r.center_q),
            format_float(r.center_p),
            format_float(r.semi_major),
            format_float(r.semi_minor),
            format_float(r.angle),
        );
    }
    out
}

/// How the reconciliation statuses are assigned, embedded in the report so it
/// is self-describing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReconcileThresholds {
    pub match_rel: f64,
    pub partial_rel: f64,
    pub note: String,
}

impl Default for ReconcileThresholds {
    fn default() -> Self {
        ReconcileThresholds {
            match_rel: MATCH_TOL_REL,
            partial_rel: PARTIAL_TOL_REL,
            note: "status is match if the relative deviation is below match_rel, \
                   partial below partial_rel, mismatch otherwise"
                .into(),
        }
    }
}

/// Engine bounds computed from the printed coefficient expansion at one g,
/// with deviations from the quoted closed forms.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PaperBranchRow {
    pub g: f64,
    pub gram: PureModelGram,
    pub qfim: Vec<Vec<f64>>,
    pub qfim_offdiag_max: f64,
    pub cs_engine: f64,
    pub cs_paper: f64,
    pub cs_rel_dev: f64,
    pub cs_status: String,
    pub ch_engine: f64,
    pub ch_solver_status: String,
    pub ch_paper: f64,
    pub ch_rel_dev: f64,
    pub ch_status: String,
}

/// First-principles Gram branch at one convention, compared entrywise
/// against the printed expansion (best over derivative sign flips) and in
/// bound values against the quoted curves.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GramBranchReport {
    pub theta_g: f64,
    pub theta_alpha: f64,
    pub kappa: f64,
    /// Sign flip of each derivative row minimizing the worst-case deviation.
    pub best_signs: Vec<i8>,
    /// Worst entrywise deviation from the sign-adjusted printed Gram, over g.
    pub gram_max_abs_dev: f64,
    pub gram_status: String,
    pub rows: Vec<GramBranchRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GramBranchRow {
    pub g: f64,
    pub qfim_offdiag_max: f64,
    pub cs_engine: f64,
    pub cs_rel_dev: f64,
    pub cs_status: String,
    pub ch_engine: f64,
    pub ch_solver_status: String,
    pub ch_rel_dev: f64,
    pub ch_status: String,
}

/// Fisher information of one measurement scheme against the quoted diagonal.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchemeBranchReport {
    pub scheme: String,
    pub rows: Vec<SchemeBranchRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchemeBranchRow {
    pub g: f64,
    /// max_j |F_jj - e^{2g}/2| / (e^{2g}/2).
    pub fi_diag_max_rel_dev: f64,
    /// max_jk |F_jk - (e^{2g}/2) delta_jk| / (e^{2g}/2).
    pub fi_full_max_rel_dev: f64,
    pub fi_status: String,
    pub tr_finv: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BestConvention {
    pub theta_g: f64,
    pub theta_alpha: f64,
    pub kappa: f64,
    pub signs: Vec<i8>,
    pub gram_max_abs_dev: f64,
}

/// Everything the reconcile command emits. Engine values are reported next to
/// the quoted ones and never overwritten by them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReconcileReport {
    pub schema: String,
    pub alpha: f64,
    pub g_values: Vec<f64>,
    pub thresholds: ReconcileThresholds,
    pub paper_branch: Vec<PaperBranchRow>,
    pub gram_branches: Vec<GramBranchReport>,
    pub scheme_branches: Vec<SchemeBranchReport>,
    pub best_convention: BestConvention,
}

fn rel_dev(engine: f64, reference: f64) -> f64 {
    (engine - reference).abs() / reference.abs().max(1e-300)
}

fn offdiag_max(q: &DMatrix<f64>) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..q.nrows() {
        for k in 0..q.ncols() {
            if j != k {
                worst = worst.max(q[(j, k)].abs());
            }
        }
    }
    worst
}

fn qfim_rows(q: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..q.nrows()).map(|j| (0..q.ncols()).map(|k| q[(j, k)]).collect()).collect()
}

fn bound_devs(frame: &OrthonormalFrame, seed: u64) -> Result<(DMatrix<f64>, f64, crate::bounds::HcrbSolution)> {
    let q = qfim_pure(frame);
    let cs = sld_crb(&q)?;
    let sol = hcrb_pure(frame, &HcrbOpts { seed, ..HcrbOpts::default() })?;
    Ok((q, cs, sol))
}

/// Builds the full reconciliation report at one alpha over the given g grid.
pub fn reconcile_report(alpha: f64, g_values: &[f64], seed: u64) -> Result<ReconcileReport> {
    if g_values.is_empty() || g_values.iter().any(|g| !g.is_finite() || *g < 0.0) {
        return Err(Error::invalid("reconcile", "g values must be finite and nonnegative"));
    }

    // Branch 1: the printed coefficient expansion, taken literally.
    let mut paper_branch = Vec::with_capacity(g_values.len());
    for (i, &g) in g_values.iter().enumerate() {
        let frame = OrthonormalFrame::paper_frame(alpha, g)?;
        let (q, cs, sol) = bound_devs(&frame, splitmix64(seed ^ i as u64))?;
        let reference = paper_reference_bounds(g);
        let cs_rel = rel_dev(cs, reference.cs);
        let ch_rel = rel_dev(sol.value, reference.ch);
        paper_branch.push(PaperBranchRow {
            g,
            gram: frame.gram()?,
            qfim: qfim_rows(&q),
            qfim_offdiag_max: offdiag_max(&q),
            cs_engine: cs,
            cs_paper: reference.cs,
            cs_rel_dev: cs_rel,
            cs_status: match_status(cs_rel).into(),
            ch_engine: sol.value,
            ch_solver_status: sol.status.as_str().into(),
            ch_paper: reference.ch,
            ch_rel_dev: ch_rel,
            ch_status: match_status(ch_rel).into(),
        });
    }

    // Branch 2: first-principles Grams over the convention knobs, each
    // compared against the printed expansion up to derivative sign flips.
    let mut gram_branches = Vec::new();
    for &theta_g in &[FRAC_PI_2, 0.0] {
        for &theta_alpha in &[0.0, FRAC_PI_2] {
            for &kappa in ALLOWED_GAINS.iter() {
                let mut printed: Vec<PureModelGram> = Vec::with_capacity(g_values.len());
                let mut computed: Vec<PureModelGram> = Vec::with_capacity(g_values.len());
                for &g in g_values {
                    printed.push(paper_gram(alpha, g)?);
                    let config = ModelConfig::new(alpha, g)
                        .with_theta_g(theta_g)
                        .with_theta_alpha(theta_alpha)
                        .with_kappa(kappa);
                    computed.push(gaussian_gram(&config)?);
                }

                let mut best_signs = vec![1i8; 4];
                let mut best_dev = f64::INFINITY;
                for mask in 0u32..16 {
                    let signs: Vec<i8> =
                        (0..4).map(|b| if mask >> b & 1 == 1 { -1 } else { 1 }).collect();
                    let dev = printed
                        .iter()
                        .zip(&computed)
                        .map(|(p, c)| c.max_abs_diff(&p.with_derivative_signs(&signs)))
                        .fold(0.0f64, f64::max);
                    if dev < best_dev {
                        best_dev = dev;
                        best_signs = signs;
                    }
                }
                let gram_scale = printed
                    .iter()
                    .map(|p| p.matrix().map(|z| z.norm()).max())
                    .fold(1.0f64, f64::max);

                let mut rows = Vec::with_capacity(g_values.len());
                for (i, &g) in g_values.iter().enumerate() {
                    let frame = orthonormalize(&computed[i], DEFAULT_RANK_TOL)?;
                    let (q, cs, sol) = bound_devs(&frame, splitmix64(seed ^ (0x100 + i as u64)))?;
                    let reference = paper_reference_bounds(g);
                    let cs_rel = rel_dev(cs, reference.cs);
                    let ch_rel = rel_dev(sol.value, reference.ch);
                    rows.push(GramBranchRow {
                        g,
                        qfim_offdiag_max: offdiag_max(&q),
                        cs_engine: cs,
                        cs_rel_dev: cs_rel,
                        cs_status: match_status(cs_rel).into(),
                        ch_engine: sol.value,
                        ch_solver_status: sol.status.as_str().into(),
                        ch_rel_dev: ch_rel,
                        ch_status: match_status(ch_rel).into(),
                    });
                }

                gram_branches.push(GramBranchReport {
                    theta_g,
                    theta_alpha,
                    kappa,
                    best_signs,
                    gram_max_abs_dev: best_dev,
                    gram_status: match_status(best_dev / gram_scale).into(),
                    rows,
                });
            }
        }
    }

    // Branch 3: measurement schemes against the quoted diagonal Fisher
    // information e^{2g}/2.
    let mut scheme_branches = Vec::new();
    for id in ["heterodyne", "qq", "squeezed", "alternate"] {
        let scheme = DualHomodyneScheme::from_id(id)?;
        let mut rows = Vec::with_capacity(g_values.len());
        for &g in g_values {
            let config = ModelConfig::new(alpha, g);
            let f = fisher_information(&homodyne_outcome_model(&config, &scheme)?);
            let reference = paper_reference_bounds(g).fi_diag;
            let mut diag_dev = 0.0f64;
            let mut full_dev = 0.0f64;
            for j in 0..f.nrows() {
                for k in 0..f.ncols() {
                    let want = if j == k { reference } else { 0.0 };
                    let dev = (f[(j, k)] - want).abs();
                    full_dev = full_dev.max(dev);
                    if j == k {
                        diag_dev = diag_dev.max(dev);
                    }
                }
            }
            rows.push(SchemeBranchRow {
                g,
                fi_diag_max_rel_dev: diag_dev / reference,
                fi_full_max_rel_dev: full_dev / reference,
                fi_status: match_status(full_dev / reference).into(),
                tr_finv: tr_inverse(&f),
            });
        }
        scheme_branches.push(SchemeBranchReport { scheme: id.into(), rows });
    }

    let best = gram_branches
        .iter()
        .min_by(|a, b| a.gram_max_abs_dev.partial_cmp(&b.gram_max_abs_dev).unwrap())
        .expect("at least one gram branch");
    let best_convention = BestConvention {
        theta_g: best.theta_g,
        theta_alpha: best.theta_alpha,
        kappa: best.kappa,
        signs: best.best_signs.clone(),
        gram_max_abs_dev: best.gram_max_abs_dev,
    };

    Ok(ReconcileReport {
        schema: RECONCILE_SCHEMA.into(),
        alpha,
        g_values: g_values.to_vec(),
        thresholds: ReconcileThresholds::default(),
        paper_branch,
        gram_branches,
        scheme_branches,
        best_convention,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_pins_the_reference_columns() {
        let spec = SweepSpec { steps: 41, ..SweepSpec::default() };
        let rows = sweep_records(&spec).unwrap();
        assert_eq!(rows.len(), 41);
        assert_eq!(rows[0].g, 0.0);
        assert_eq!(rows[0].cs_paper, 4.0);
        assert_eq!(rows[0].ch_paper, 8.0);
        let at_one = &rows[20];
        assert_eq!(at_one.g, 1.0);
        assert!((at_one.ch_paper - 8.0 * (-2.0f64).exp()).abs() < 1e-15);
        assert_eq!(at_one.ch_paper, at_one.cf_paper);
        let last = rows.last().unwrap();
        assert_eq!(last.g, 2.0);
        assert!((last.ch_paper / last.cs_paper - (1.0 + (-8.0f64).exp())).abs() < 1e-12);
        // Engine columns carry the coefficient-expansion values.
        assert!((rows[0].cs_engine - 4.0).abs() < 1e-10);
        assert!((rows[0].ch_engine - 8.0).abs() < 1e-9);
        assert_eq!(rows[0].ch_status, "exact");
        assert!((rows[0].tr_finv_engine.unwrap() - 8.0).abs() < 1e-9);
    }

    #[test]
    fn sweep_g_grid_is_exact_at_the_endpoints() {
        let spec = SweepSpec { g_min: 0.3, g_max: 1.7, steps: 8, ..SweepSpec::default() };
        assert_eq!(spec.g_at(0), 0.3);
        assert_eq!(spec.g_at(7), 1.7);
        let one = SweepSpec { steps: 1, ..SweepSpec::default() };
        assert_eq!(one.g_at(0), 0.0);
    }

    #[test]
    fn csv_is_deterministic_and_17_digits() {
        let spec = SweepSpec { steps: 3, scheme: "qq".into(), ..SweepSpec::default() };
        let a = bounds_csv(&sweep_records(&spec).unwrap());
        let b = bounds_csv(&sweep_records(&spec).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with("# schema: bounds-sweep-v1\ng,cs_engine,"));
        // qq is rank deficient: the nullable column is empty.
        let row = a.lines().nth(2).unwrap();
        assert!(row.ends_with(",,"));
        assert!(row.contains("4.0000000000000000e0"));
    }

    #[test]
    fn negative_zero_is_normalized() {
        assert_eq!(format_float(-0.0), format_float(0.0));
    }

    #[test]
    fn phasespace_rows_cover_both_modes_at_every_stage() {
        let rows = phasespace_rows(&ModelConfig::new(1.0, 0.5), &[0.0; 4]).unwrap();
        assert_eq!(rows.len(), 8);
        assert_eq!(rows[0].stage, "input");
        assert_eq!(rows[7].stage, "output");
        // Squeezed-stage marginals are thermal circles of radius sqrt(cosh 2g)/2.
        let want = (1.0f64.cosh()).sqrt() / 2.0;
        for r in rows.iter().filter(|r| r.stage == "squeezed") {
            assert!((r.semi_major - want).abs() < 1e-12);
            assert!((r.semi_minor - want).abs() < 1e-12);
        }
        let csv = phasespace_csv(&rows);
        assert!(csv.starts_with("# schema: phasespace-v1\nstage,mode,"));
        assert_eq!(csv.lines().count(), 10);
    }

    #[test]
    fn phasespace_encoding_only_moves_centers() {
        let theta = [0.4, -0.2, 0.1, 0.3];
        let at_zero = phasespace_rows(&ModelConfig::new(1.0, 0.5), &[0.0; 4]).unwrap();
        let shifted = phasespace_rows(&ModelConfig::new(1.0, 0.5), &theta).unwrap();
        for (a, b) in at_zero.iter().zip(&shifted).filter(|(a, _)| a.stage == "encoded") {
            assert_eq!(a.semi_major, b.semi_major);
            assert_eq!(a.semi_minor, b.semi_minor);
            let dq = b.center_q - a.center_q;
            let want = 0.5 * theta[2 * a.mode];
            assert!((dq - want).abs() < 1e-12);
        }
    }

    #[test]
    fn reconcile_identifies_the_matching_convention() {
        let report = reconcile_report(1.0, &RECONCILE_G_VALUES, 7).unwrap();
        let best = &report.best_convention;
        assert_eq!(best.theta_g, 0.0);
        assert_eq!(best.theta_alpha, FRAC_PI_2);
        assert_eq!(best.kappa, 0.5);
        assert_eq!(best.signs, vec![1, -1, 1, -1]);
        assert!(best.gram_max_abs_dev < 1e-12, "dev = {:.3e}", best.gram_max_abs_dev);
        let branch = report
            .gram_branches
            .iter()
            .find(|b| b.theta_g == 0.0 && b.theta_alpha == FRAC_PI_2 && b.kappa == 0.5)
            .unwrap();
        assert_eq!(branch.gram_status, "match");
    }

    #[test]
    fn reconcile_paper_branch_reports_honest_deviations() {
        let report = reconcile_report(1.0, &[0.25, 0.5, 1.0], 3).unwrap();
        assert_eq!(report.paper_branch.len(), 3);
        for row in &report.paper_branch {
            // The expansion's own data gives cs = 4 cosh 2g and
            // ch = 4 cosh 2g + 4, far from the quoted decaying curves.
            let c2 = (2.0 * row.g).cosh();
            assert!((row.cs_engine - 4.0 * c2).abs() < 1e-9);
            assert!((row.ch_engine - (4.0 * c2 + 4.0)).abs() < 1e-9);
            assert_eq!(row.cs_status, "mismatch");
            assert_eq!(row.ch_status, "mismatch");
            assert_eq!(row.ch_solver_status, "exact");
            assert!(row.qfim_offdiag_max > 0.0);
            assert_eq!(row.qfim.len(), 4);
        }
    }

    #[test]
    fn reconcile_scheme_branch_flags_the_squeezed_diagonal() {
        let report = reconcile_report(1.0, &[0.5], 5).unwrap();
        let squeezed = report.scheme_branches.iter().find(|s| s.scheme == "squeezed").unwrap();
        let row = &squeezed.rows[0];
        // Diagonal agrees with the quoted e^{2g}/2 exactly, but the matrix
        // is rank deficient, so the full comparison fails and Tr F^-1 is null.
        assert!(row.fi_diag_max_rel_dev < 1e-12);
        assert!(row.fi_full_max_rel_dev > 0.9);
        assert!(row.tr_finv.is_none());

        let hetero = report.scheme_branches.iter().find(|s| s.scheme == "heterodyne").unwrap();
        assert!(hetero.rows[0].tr_finv.is_some());
    }

    #[test]
    fn reconcile_is_deterministic() {
        let a = serde_json::to_string(&reconcile_report(1.0, &[0.0, 0.5], 11).unwrap()).unwrap();
        let b = serde_json::to_string(&reconcile_report(1.0, &[0.0, 0.5], 11).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
