//! Classical side of the receiver: Fisher information of homodyne schemes,
//! deterministic synthetic sampling, and generalized least-squares
//! estimation with Monte Carlo error bars.

use crate::error::{Error, Result};
use crate::gaussian::{homodyne_outcome_model, OutcomeModel};
use crate::ModelConfig;
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::Path;

pub use crate::gaussian::{
    ChannelKind, DualHomodyneScheme, LinearGaussianOutcomeModel, MeasurementSetting,
    SettingChannel,
};
pub use crate::report::bound_comparison;

/// Shots drawn per RNG block; sampling is reproducible shot-for-shot for a
/// given seed regardless of how many shots are requested.
pub const SAMPLE_BLOCK: usize = 4096;

/// Relative eigenvalue cutoff below which a Fisher matrix counts as singular.
pub const FISHER_SINGULAR_TOL: f64 = 1e-10;

/// Per-shot Fisher information of the scheme: the weight-averaged
/// J^T Sigma^-1 J over settings.
pub fn fisher_information(model: &OutcomeModel) -> DMatrix<f64> {
    let d = model.parts[0].1.jacobian.ncols();
    let mut f = DMatrix::zeros(d, d);
    for (w, part) in &model.parts {
        let chol = Cholesky::new(part.covariance.clone())
            .expect("outcome covariance is positive definite");
        let sig_inv_j = chol.solve(&part.jacobian);
        f += (part.jacobian.transpose() * sig_inv_j) * *w;
    }
    (f.clone() + f.transpose()) * 0.5
}

/// Tr(F^-1) if F is invertible.
pub fn tr_inverse(f: &DMatrix<f64>) -> Option<f64> {
    let eig = f.clone().symmetric_eigen().eigenvalues;
    let lmax = eig.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let lmin = eig.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if lmin <= FISHER_SINGULAR_TOL * lmax.max(1e-300) {
        None
    } else {
        Some(eig.iter().map(|l| 1.0 / l).sum())
    }
}

/// Synthetic outcomes of one setting: `data[(channel, shot)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SettingOutcomes {
    pub labels: Vec<String>,
    pub data: DMatrix<f64>,
}

/// A full synthetic run: outcomes of every setting plus the provenance
/// needed to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeBatch {
    pub scheme: String,
    pub seed: u64,
    pub theta_true: [f64; 4],
    pub settings: Vec<SettingOutcomes>,
}

#[derive(Serialize, Deserialize)]
struct BatchMeta {
    schema: String,
    scheme: String,
    seed: u64,
    theta_true: [f64; 4],
    settings: Vec<SettingMeta>,
}

#[derive(Serialize, Deserialize)]
struct SettingMeta {
    labels: Vec<String>,
    channels: usize,
    shots: usize,
}

impl OutcomeBatch {
    pub fn total_shots(&self) -> usize {
        self.settings.iter().map(|s| s.data.ncols()).sum()
    }

    /// Writes `<stem>.json` (metadata) and `<stem>.bin` (f64 little-endian,
    /// column-major, settings concatenated).
    pub fn write(&self, stem: &Path) -> Result<()> {
        let meta = BatchMeta {
            schema: "outcome-batch-v1".into(),
            scheme: self.scheme.clone(),
            seed: self.seed,
            theta_true: self.theta_true,
            settings: self
                .settings
                .iter()
                .map(|s| SettingMeta {
                    labels: s.labels.clone(),
                    channels: s.data.nrows(),
                    shots: s.data.ncols(),
                })
                .collect(),
        };
        std::fs::write(stem.with_extension("json"), serde_json::to_string_pretty(&meta)?)?;
        let mut bin = std::fs::File::create(stem.with_extension("bin"))?;
        for s in &self.settings {
            for v in s.data.as_slice() {
                bin.write_all(&v.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn read(stem: &Path) -> Result<Self> {
        let meta: BatchMeta =
            serde_json::from_str(&std::fs::read_to_string(stem.with_extension("json"))?)?;
        if meta.schema != "outcome-batch-v1" {
            return Err(Error::invalid("outcome batch", format!("schema {:?}", meta.schema)));
        }
        let mut raw = Vec::new();
        std::fs::File::open(stem.with_extension("bin"))?.read_to_end(&mut raw)?;
        let want: usize = meta.settings.iter().map(|s| s.channels * s.shots * 8).sum();
        if raw.len() != want {
            return Err(Error::invalid(
                "outcome batch",
                format!("binary payload is {} bytes, expected {want}", raw.len()),
            ));
        }
        let mut off = 0usize;
        let mut settings = Vec::with_capacity(meta.settings.len());
        for sm in &meta.settings {
            let n = sm.channels * sm.shots;
            let mut vals = Vec::with_capacity(n);
            for i in 0..n {
                let mut b = [0u8; 8];
                b.copy_from_slice(&raw[off + 8 * i..off + 8 * i + 8]);
                vals.push(f64::from_le_bytes(b));
            }
            off += 8 * n;
            settings.push(SettingOutcomes {
                labels: sm.labels.clone(),
                data: DMatrix::from_column_slice(sm.channels, sm.shots, &vals),
            });
        }
        Ok(OutcomeBatch { scheme: meta.scheme, seed: meta.seed, theta_true: meta.theta_true, settings })
    }
}

// SplitMix64: cheap, well-mixed stream derivation for per-block seeds.
pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn block_rng(seed: u64, setting: usize, block: usize) -> ChaCha12Rng {
    let s = splitmix64(splitmix64(seed ^ ((setting as u64) << 32)) ^ block as u64);
    ChaCha12Rng::seed_from_u64(s)
}

/// Allocates `shots` across settings by largest remainder on the weights.
fn allocate_shots(weights: &[f64], shots: usize) -> Vec<usize> {
    let mut counts: Vec<usize> = weights.iter().map(|w| (w * shots as f64).floor() as usize).collect();
    let mut remainders: Vec<(f64, usize)> = weights
        .iter()
        .enumerate()
        .map(|(i, w)| (w * shots as f64 - counts[i] as f64, i))
        .collect();
    remainders.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    let mut left = shots - counts.iter().sum::<usize>();
    for (_, i) in remainders {
        if left == 0 {
            break;
        }
        counts[i] += 1;
        left -= 1;
    }
    counts
}

/// Draws `shots` synthetic outcomes at the true parameter. Deterministic in
/// (config, scheme, theta_true, shots, seed); outcomes are generated in
/// fixed-size blocks with independently derived substreams, so a prefix of a
/// longer run equals a shorter run.
pub fn sample_outcomes(
    config: &ModelConfig,
    scheme: &DualHomodyneScheme,
    theta_true: &[f64; 4],
    shots: usize,
    seed: u64,
) -> Result<OutcomeBatch> {
    if shots == 0 {
        return Err(Error::invalid("shots", "need at least one shot"));
    }
    if theta_true.iter().any(|t| !t.is_finite()) {
        return Err(Error::invalid("theta", "true parameters must be finite"));
    }
    let model = homodyne_outcome_model(config, scheme)?;
    let weights: Vec<f64> = model.parts.iter().map(|(w, _)| *w).collect();
    let counts = allocate_shots(&weights, shots);

    let theta_vec = DVector::from_row_slice(theta_true);
    let mut settings = Vec::with_capacity(model.parts.len());
    for (s_idx, (_, part)) in model.parts.iter().enumerate() {
        let m = part.jacobian.nrows();
        let mean = &part.jacobian * &theta_vec + &part.offset;
        let chol = Cholesky::<f64, Dyn>::new(part.covariance.clone())
            .expect("outcome covariance is positive definite");
        let l = chol.l();
        let n = counts[s_idx];
        let mut data = DMatrix::zeros(m, n);
        let mut shot = 0usize;
        let mut block = 0usize;
        while shot < n {
            let mut rng = block_rng(seed, s_idx, block);
            let in_block = SAMPLE_BLOCK.min(n - shot);
            for col in 0..in_block {
                let z: DVector<f64> =
                    DVector::from_fn(m, |_, _| StandardNormal.sample(&mut rng));
                let x = &mean + &l * z;
                data.set_column(shot + col, &x);
            }
            shot += in_block;
            block += 1;
        }
        settings.push(SettingOutcomes { labels: part.labels.clone(), data });
    }
    Ok(OutcomeBatch {
        scheme: scheme.name.clone(),
        seed,
        theta_true: *theta_true,
        settings,
    })
}

/// Point estimate and Monte Carlo error statistics.
///
/// `mse` is the empirical per-shot-normalized error matrix
/// E[(theta_hat - theta)(theta_hat - theta)^T]; `mse_se` holds the standard
/// error of each entry. For multi-setting schemes one estimate consumes one
/// shot from every setting and the matrix is scaled by shots-per-estimate,
/// which makes it directly comparable to the inverse per-shot Fisher
/// information and to the scalar bounds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimationResult {
    pub scheme: String,
    pub shots: usize,
    pub estimates: usize,
    pub shots_per_estimate: usize,
    pub seed: u64,
    pub theta_true: [f64; 4],
    pub theta_hat_mean: Vec<f64>,
    pub mse: Vec<Vec<f64>>,
    pub mse_se: Vec<Vec<f64>>,
    pub tr_mse: f64,
    pub tr_mse_se: f64,
}

/// GLS inversion of a batch: per estimate theta_hat = F^-1 sum_s J^T Sigma^-1 x_s.
pub fn estimate_and_mse(
    config: &ModelConfig,
    scheme: &DualHomodyneScheme,
    batch: &OutcomeBatch,
) -> Result<EstimationResult> {
    let model = homodyne_outcome_model(config, scheme)?;
    if model.parts.len() != batch.settings.len() {
        return Err(Error::invalid(
            "outcome batch",
            format!("{} settings, scheme has {}", batch.settings.len(), model.parts.len()),
        ));
    }
    let d = model.parts[0].1.jacobian.ncols();

    // Joint Fisher information of one shot from every setting (unweighted:
    // an estimate consumes the settings one-for-one).
    let mut f_unit = DMatrix::zeros(d, d);
    let mut solves = Vec::with_capacity(model.parts.len());
    for (_, part) in &model.parts {
        let chol = Cholesky::new(part.covariance.clone())
            .expect("outcome covariance is positive definite");
        let sig_inv_j = chol.solve(&part.jacobian);
        f_unit += part.jacobian.transpose() * &sig_inv_j;
        solves.push(sig_inv_j);
    }
    let f_unit = (f_unit.clone() + f_unit.transpose()) * 0.5;
    let eig = f_unit.clone().symmetric_eigen().eigenvalues;
    let lmax = eig.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    if eig.iter().any(|&l| l <= FISHER_SINGULAR_TOL * lmax.max(1e-300)) {
        return Err(Error::SchemeNotIdentifiable(format!(
            "Fisher information is rank deficient for scheme {:?}",
            scheme.name
        )));
    }
    let f_inv = Cholesky::new(f_unit.clone())
        .ok_or_else(|| {
            Error::SchemeNotIdentifiable(format!("Fisher information not positive definite for {:?}", scheme.name))
        })?
        .inverse();

    let estimates = batch.settings.iter().map(|s| s.data.ncols()).min().unwrap_or(0);
    if estimates == 0 {
        return Err(Error::invalid("outcome batch", "no shots"));
    }
    let spe = batch.settings.len();

    let theta_true = DVector::from_row_slice(&batch.theta_true);
    let mut sum_hat: DVector<f64> = DVector::zeros(d);
    let mut sum_outer: DMatrix<f64> = DMatrix::zeros(d, d);
    let mut sum_outer_sq: DMatrix<f64> = DMatrix::zeros(d, d);
    let mut sum_tr = 0.0f64;
    let mut sum_tr_sq = 0.0f64;
    for e in 0..estimates {
        let mut score = DVector::zeros(d);
        for (s_idx, part) in model.parts.iter().enumerate() {
            let x = batch.settings[s_idx].data.column(e);
            let centered = x - &part.1.offset;
            score += solves[s_idx].transpose() * centered;
        }
        let hat = &f_inv * score;
        let err = &hat - &theta_true;
        sum_hat += &hat;
        let mut tr = 0.0;
        for j in 0..d {
            for k in 0..d {
                let o = err[j] * err[k];
                sum_outer[(j, k)] += o;
                sum_outer_sq[(j, k)] += o * o;
                if j == k {
                    tr += o;
                }
            }
        }
        sum_tr += tr;
        sum_tr_sq += tr * tr;
    }

    let n = estimates as f64;
    let scale = spe as f64; // per-shot normalization
    let mean_hat = sum_hat / n;
    let mut mse = vec![vec![0.0; d]; d];
    let mut mse_se = vec![vec![0.0; d]; d];
    for j in 0..d {
        for k in 0..d {
            let mean = sum_outer[(j, k)] / n;
            let var = (sum_outer_sq[(j, k)] / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
            mse[j][k] = scale * mean;
            mse_se[j][k] = scale * (var / n).sqrt();
        }
    }
    let tr_mean = sum_tr / n;
    let tr_var = (sum_tr_sq / n - tr_mean * tr_mean).max(0.0) * n / (n - 1.0).max(1.0);

    Ok(EstimationResult {
        scheme: batch.scheme.clone(),
        shots: batch.total_shots(),
        estimates,
        shots_per_estimate: spe,
        seed: batch.seed,
        theta_true: batch.theta_true,
        theta_hat_mean: mean_hat.iter().copied().collect(),
        mse,
        mse_se,
        tr_mse: scale * tr_mean,
        tr_mse_se: scale * (tr_var / n).sqrt(),
    })
}

/// Convenience wrapper: sample then estimate.
pub fn run_monte_carlo(
    config: &ModelConfig,
    scheme: &DualHomodyneScheme,
    theta_true: &[f64; 4],
    shots: usize,
    seed: u64,
) -> Result<EstimationResult> {
    let batch = sample_outcomes(config, scheme, theta_true, shots, seed)?;
    estimate_and_mse(config, scheme, &batch)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(g: f64) -> ModelConfig {
        ModelConfig::new(1.0, g)
    }

    #[test]
    fn heterodyne_fisher_at_zero_squeezing_is_half_identity() {
        let model = homodyne_outcome_model(&config(0.0), &DualHomodyneScheme::heterodyne()).unwrap();
        let f = fisher_information(&model);
        assert!((f - DMatrix::identity(4, 4) * 0.5).abs().max() < 1e-12);
    }

    #[test]
    fn heterodyne_trace_inverse_formula() {
        // Tr F^-1 = (1 + cosh 2g) / kappa^2 for the dual heterodyne readout.
        for g in [0.0, 0.3, 0.9] {
            let model =
                homodyne_outcome_model(&config(g), &DualHomodyneScheme::heterodyne()).unwrap();
            let f = fisher_information(&model);
            let tr = tr_inverse(&f).unwrap();
            let want = (1.0 + (2.0 * g).cosh()) * 4.0;
            assert!((tr - want).abs() < 1e-9, "g = {g}: {tr} vs {want}");
        }
    }

    #[test]
    fn single_quadrature_settings_are_rank_deficient() {
        for scheme in [
            DualHomodyneScheme::both_q(),
            DualHomodyneScheme::squeezed_axes(),
            DualHomodyneScheme::q1_p2(),
        ] {
            let model = homodyne_outcome_model(&config(0.5), &scheme).unwrap();
            assert!(tr_inverse(&fisher_information(&model)).is_none(), "{}", scheme.name);
        }
    }

    #[test]
    fn alternation_fisher_is_isotropic() {
        // (qq + pp)/2 gives F = (2 kappa^2 / cosh 2g) I.
        let g = 0.7;
        let model =
            homodyne_outcome_model(&config(g), &DualHomodyneScheme::alternating_qq_pp()).unwrap();
        let f = fisher_information(&model);
        let want = 0.5 / (2.0 * g).cosh();
        assert!((f - DMatrix::identity(4, 4) * want).abs().max() < 1e-12);
    }

    #[test]
    fn squeezed_axes_diagonal_grows_like_the_quoted_curve() {
        // Diagonal entries e^{2g}/2 at kappa = 1/2, even though the matrix
        // itself is rank 2.
        let g = 0.8;
        let model =
            homodyne_outcome_model(&config(g), &DualHomodyneScheme::squeezed_axes()).unwrap();
        let f = fisher_information(&model);
        let want = 0.5 * (2.0 * g).exp();
        for j in 0..4 {
            assert!((f[(j, j)] - want).abs() < 1e-12, "F[{j},{j}] = {}", f[(j, j)]);
        }
    }

    #[test]
    fn sampling_is_deterministic_and_seed_sensitive() {
        let theta = [0.1, -0.2, 0.05, 0.3];
        let a = sample_outcomes(&config(0.4), &DualHomodyneScheme::heterodyne(), &theta, 500, 7).unwrap();
        let b = sample_outcomes(&config(0.4), &DualHomodyneScheme::heterodyne(), &theta, 500, 7).unwrap();
        assert_eq!(a, b);
        let c = sample_outcomes(&config(0.4), &DualHomodyneScheme::heterodyne(), &theta, 500, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn longer_runs_extend_shorter_ones() {
        let theta = [0.0; 4];
        let short = sample_outcomes(&config(0.2), &DualHomodyneScheme::heterodyne(), &theta, 100, 3).unwrap();
        let long = sample_outcomes(&config(0.2), &DualHomodyneScheme::heterodyne(), &theta, 5000, 3).unwrap();
        let head = long.settings[0].data.columns(0, 100).into_owned();
        assert_eq!(short.settings[0].data, head);
    }

    #[test]
    fn gls_is_unbiased_and_hits_the_crb() {
        let cfg = config(0.0);
        let theta = [0.2, -0.4, 0.1, 0.0];
        let res = run_monte_carlo(&cfg, &DualHomodyneScheme::heterodyne(), &theta, 40_000, 11).unwrap();
        // E[Tr V] = Tr F^-1 = 8 at g = 0; allow 5 standard errors.
        assert!((res.tr_mse - 8.0).abs() < 5.0 * res.tr_mse_se, "{} +- {}", res.tr_mse, res.tr_mse_se);
        for (j, th) in theta.iter().enumerate() {
            let se = (res.mse[j][j] / res.estimates as f64).sqrt() * 3.0;
            assert!((res.theta_hat_mean[j] - th).abs() < se.max(0.05));
        }
    }

    #[test]
    fn alternation_pairs_shots_and_normalizes_per_shot() {
        let cfg = config(0.3);
        let theta = [0.0; 4];
        let res =
            run_monte_carlo(&cfg, &DualHomodyneScheme::alternating_qq_pp(), &theta, 30_000, 5).unwrap();
        assert_eq!(res.shots_per_estimate, 2);
        assert_eq!(res.estimates, 15_000);
        // Tr V should approach Tr F_mix^-1 = 8 cosh 2g.
        let want = 8.0 * (2.0f64 * 0.3).cosh();
        assert!((res.tr_mse - want).abs() < 6.0 * res.tr_mse_se, "{} vs {want}", res.tr_mse);
    }

    #[test]
    fn unidentifiable_scheme_is_rejected_with_the_right_error() {
        let cfg = config(0.5);
        let err = run_monte_carlo(&cfg, &DualHomodyneScheme::both_q(), &[0.0; 4], 2_000, 1).unwrap_err();
        assert!(err.to_string().contains("not jointly identifiable"));
    }

    #[test]
    fn batch_roundtrip_through_files() {
        let dir = std::env::temp_dir().join("hcrb_batch_test");
        std::fs::create_dir_all(&dir).unwrap();
        let stem = dir.join("batch");
        let theta = [0.1, 0.0, -0.1, 0.2];
        let batch =
            sample_outcomes(&config(0.2), &DualHomodyneScheme::alternating_qq_pp(), &theta, 999, 21)
                .unwrap();
        batch.write(&stem).unwrap();
        let back = OutcomeBatch::read(&stem).unwrap();
        assert_eq!(batch, back);
        std::fs::remove_dir_all(&dir).ok();
    }
}
