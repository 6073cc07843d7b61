//! Measurement-layer properties: Fisher information algebra, estimator
//! sanity, and reproducibility of the sampling pipeline.

use hcrb_core::measurement::{
    fisher_information, run_monte_carlo, sample_outcomes, DualHomodyneScheme,
};
use hcrb_core::gaussian::homodyne_outcome_model;
use hcrb_core::ModelConfig;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn scheme_id() -> impl Strategy<Value = &'static str> {
    prop::sample::select(DualHomodyneScheme::IDS.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fisher_information_is_symmetric_psd(g in 0.0f64..2.0, id in scheme_id()) {
        let config = ModelConfig::new(1.0, g);
        let scheme = DualHomodyneScheme::from_id(id).unwrap();
        let f = fisher_information(&homodyne_outcome_model(&config, &scheme).unwrap());
        prop_assert!((&f - f.transpose()).amax() < 1e-12 * (1.0 + f.amax()));
        let min_eig = f
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &l| a.min(l));
        prop_assert!(min_eig > -1e-10, "{id}: min eig {min_eig}");
    }

    #[test]
    fn mixture_information_is_the_weighted_sum(g in 0.0f64..2.0) {
        // The 50/50 qq/pp alternation must carry exactly half of each
        // single-setting scheme's information.
        let config = ModelConfig::new(1.0, g);
        let model = |id: &str| {
            homodyne_outcome_model(&config, &DualHomodyneScheme::from_id(id).unwrap()).unwrap()
        };
        let f_mix = fisher_information(&model("alternate"));
        let f_qq = fisher_information(&model("qq"));
        let f_pp = fisher_information(&model("pp"));
        let recomposed: DMatrix<f64> = 0.5 * f_qq + 0.5 * f_pp;
        prop_assert!((&f_mix - recomposed).amax() < 1e-12 * (1.0 + f_mix.amax()));
    }

    #[test]
    fn sampling_is_reproducible_and_seed_sensitive(
        g in 0.0f64..1.5,
        shots in 8usize..64,
        seed in any::<u64>(),
    ) {
        let config = ModelConfig::new(1.0, g);
        let scheme = DualHomodyneScheme::heterodyne();
        let theta = [0.3, -0.1, 0.0, 0.7];
        let a = sample_outcomes(&config, &scheme, &theta, shots, seed).unwrap();
        let b = sample_outcomes(&config, &scheme, &theta, shots, seed).unwrap();
        for (sa, sb) in a.settings.iter().zip(b.settings.iter()) {
            prop_assert_eq!(sa.data.as_slice(), sb.data.as_slice());
        }
        let c = sample_outcomes(&config, &scheme, &theta, shots, seed ^ 1).unwrap();
        prop_assert!(a.settings[0].data.as_slice() != c.settings[0].data.as_slice());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn gls_runs_are_unbiased_within_noise(
        theta in [-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0],
        seed in any::<u64>(),
    ) {
        let config = ModelConfig::new(1.0, 0.4);
        let scheme = DualHomodyneScheme::heterodyne();
        let res = run_monte_carlo(&config, &scheme, &theta, 4096, seed).unwrap();
        prop_assert_eq!(res.estimates, 4096);
        for (j, th) in theta.iter().enumerate() {
            // Per-coordinate standard error of the estimator mean.
            let se = (res.mse[j][j] / res.estimates as f64).sqrt();
            let bias = res.theta_hat_mean[j] - th;
            prop_assert!(bias.abs() < 5.0 * se, "coordinate {j}: bias {bias} se {se}");
        }
        // The reported MSE matrix is a Gram-type average: symmetric PSD.
        let d = res.mse.len();
        let v = DMatrix::from_fn(d, d, |i, j| res.mse[i][j]);
        prop_assert!((&v - v.transpose()).amax() < 1e-12 * (1.0 + v.amax()));
        let min_eig = v
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &l| a.min(l));
        prop_assert!(min_eig > -1e-12 * (1.0 + v.amax()));
        for j in 0..d {
            prop_assert!(res.mse[j][j] >= 0.0);
        }
    }
}
