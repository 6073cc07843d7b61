//! Gram matrix of (|psi>, |d1 psi>, ..., |dd psi>) built two ways: from the
//! published coefficient expansion, and from first principles via the
//! Gaussian pipeline.
//!
//! Quadrature ordering: r = (q1, p1, q2, p2).

use crate::error::{Error, Result};
use crate::gaussian::{beam_splitter_5050, omega, propagate_pipeline};
use crate::ModelConfig;
use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

type C64 = Complex<f64>;

/// Hermitian (d+1) x (d+1) matrix G_jk = <psi_j | psi_k> with psi_0 the state
/// and psi_j (j >= 1) its parameter derivatives at the operating point.
///
/// Serializes as row-major entries of [re, im] pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GramJson", into = "GramJson")]
pub struct PureModelGram {
    g: DMatrix<C64>,
}

#[derive(Serialize, Deserialize)]
struct GramJson {
    d: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

impl From<PureModelGram> for GramJson {
    fn from(gram: PureModelGram) -> Self {
        let n = gram.g.nrows();
        GramJson {
            d: n - 1,
            entries: (0..n)
                .map(|j| (0..n).map(|k| [gram.g[(j, k)].re, gram.g[(j, k)].im]).collect())
                .collect(),
        }
    }
}

impl TryFrom<GramJson> for PureModelGram {
    type Error = Error;

    fn try_from(v: GramJson) -> Result<Self> {
        let n = v.d + 1;
        if v.entries.len() != n || v.entries.iter().any(|row| row.len() != n) {
            return Err(Error::invalid("gram", "entry table does not match d"));
        }
        let g = DMatrix::from_fn(n, n, |j, k| {
            let [re, im] = v.entries[j][k];
            C64::new(re, im)
        });
        PureModelGram::new(g)
    }
}

impl PureModelGram {
    pub fn new(g: DMatrix<C64>) -> Result<Self> {
        if g.nrows() != g.ncols() || g.nrows() < 2 {
            return Err(Error::invalid("gram", format!("shape {}x{}", g.nrows(), g.ncols())));
        }
        let herm_defect = (&g - g.adjoint()).map(|z| z.norm()).max();
        if herm_defect > 1e-10 {
            return Err(Error::invalid("gram", format!("not Hermitian (defect {herm_defect:.3e})")));
        }
        if (g[(0, 0)] - C64::new(1.0, 0.0)).norm() > 1e-8 {
            return Err(Error::invalid(
                "gram",
                format!("state is not normalized: G_00 = {}", g[(0, 0)]),
            ));
        }
        Ok(PureModelGram { g })
    }

    pub fn d(&self) -> usize {
        self.g.nrows() - 1
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.g
    }

    pub fn entry(&self, j: usize, k: usize) -> C64 {
        self.g[(j, k)]
    }

    /// Smallest eigenvalue; the Gram of any actual vector family is PSD.
    pub fn min_eigenvalue(&self) -> f64 {
        self.g
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b))
    }

    /// Flips the sign of derivative rows j (1-based index into psi_1..psi_d)
    /// where `signs[j-1] < 0`. The state row is never flipped.
    pub fn with_derivative_signs(&self, signs: &[i8]) -> PureModelGram {
        assert_eq!(signs.len(), self.d(), "one sign per derivative");
        let mut g = self.g.clone();
        for (idx, &s) in signs.iter().enumerate() {
            if s >= 0 {
                continue;
            }
            let j = idx + 1;
            for k in 0..g.ncols() {
                g[(j, k)] = -g[(j, k)];
            }
            for k in 0..g.nrows() {
                g[(k, j)] = -g[(k, j)];
            }
        }
        PureModelGram { g }
    }

    pub fn max_abs_diff(&self, other: &PureModelGram) -> f64 {
        assert_eq!(self.d(), other.d());
        (&self.g - &other.g).map(|z| z.norm()).max()
    }
}

/// Coefficients of (psi_0, .., psi_4) on the orthonormal basis (e0, e1, e2)
/// as printed in the source analysis: rows are states, columns basis vectors.
pub fn paper_coefficients(alpha: f64, g: f64) -> DMatrix<C64> {
    let (c, s) = (g.cosh(), g.sinh());
    let i = C64::new(0.0, 1.0);
    let re = |x: f64| C64::new(x, 0.0);
    DMatrix::from_row_slice(5, 3, &[
        re(1.0), re(0.0), re(0.0),
        -i * alpha * c, i * (s / 2.0), -i * (c / 2.0),
        re(0.0), re(-s / 2.0), re(-c / 2.0),
        -i * alpha * s, i * (c / 2.0), -i * (s / 2.0),
        re(0.0), re(c / 2.0), re(s / 2.0),
    ])
}

/// Gram matrix implied by the published coefficient expansion, taken at face
/// value: G = conj(A) A^T.
pub fn paper_gram(alpha: f64, g: f64) -> Result<PureModelGram> {
    if !alpha.is_finite() || alpha < 0.0 || !g.is_finite() {
        return Err(Error::invalid("paper gram", format!("alpha = {alpha}, g = {g}")));
    }
    let a = paper_coefficients(alpha, g);
    PureModelGram::new(a.conjugate() * a.transpose())
}

/// First-principles Gram matrix from the Gaussian pipeline at theta = 0.
///
/// The derivative generators at the output are i u_j . r with
/// u_j = 2 kappa S_bs w_j (w_j the pre-splitter displacement directions), so
///   G_0j = i u_j^T m,
///   G_jk = u_j^T C u_k + (u_j^T m)(u_k^T m) + (i/4) u_j^T Omega u_k,
/// with (m, C) the output mean and covariance.
pub fn gaussian_gram(config: &ModelConfig) -> Result<PureModelGram> {
    config.validate()?;
    let stages = propagate_pipeline(config, &[0.0; 4])?;
    let m = stages.output.mean().clone();
    let cov = stages.output.cov().clone();
    let w = omega(2);
    let s_bs = beam_splitter_5050();

    // Pre-splitter generator directions for (th1, th2, th3, th4):
    // -P1, +Q1, -P2, +Q2 scaled by 2 kappa.
    let pre: [[f64; 4]; 4] = [
        [0.0, -1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
    ];
    let us: Vec<DVector<f64>> = pre
        .iter()
        .map(|row| s_bs.matrix() * DVector::from_row_slice(row) * (2.0 * config.kappa))
        .collect();

    let i = C64::new(0.0, 1.0);
    let mut g = DMatrix::from_element(5, 5, C64::new(0.0, 0.0));
    g[(0, 0)] = C64::new(1.0, 0.0);
    for (j, uj) in us.iter().enumerate() {
        let first_moment = uj.dot(&m);
        g[(0, j + 1)] = i * first_moment;
        g[(j + 1, 0)] = -i * first_moment;
        for (k, uk) in us.iter().enumerate() {
            let quad = uj.dot(&(&cov * uk)) + uj.dot(&m) * uk.dot(&m);
            let comm = uj.dot(&(&w * uk)) * 0.25;
            g[(j + 1, k + 1)] = C64::new(quad, comm);
        }
    }
    PureModelGram::new(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    const TOL: f64 = 1e-12;

    fn close(z: C64, re: f64, im: f64) -> bool {
        (z.re - re).abs() < TOL && (z.im - im).abs() < TOL
    }

    #[test]
    fn paper_gram_reproduces_published_overlaps() {
        let (alpha, g) = (1.3f64, 0.6f64);
        let (c, s) = (g.cosh(), g.sinh());
        let (c2, s2) = ((2.0 * g).cosh(), (2.0 * g).sinh());
        let gm = paper_gram(alpha, g).unwrap();

        // First moments: only the odd derivatives overlap the state.
        assert!(close(gm.entry(0, 1), 0.0, -alpha * c));
        assert!(close(gm.entry(0, 2), 0.0, 0.0));
        assert!(close(gm.entry(0, 3), 0.0, -alpha * s));
        assert!(close(gm.entry(0, 4), 0.0, 0.0));

        // Second moments.
        assert!(close(gm.entry(1, 1), alpha * alpha * c * c + c2 / 4.0, 0.0));
        assert!(close(gm.entry(2, 2), c2 / 4.0, 0.0));
        assert!(close(gm.entry(3, 3), alpha * alpha * s * s + c2 / 4.0, 0.0));
        assert!(close(gm.entry(4, 4), c2 / 4.0, 0.0));
        assert!(close(gm.entry(1, 3), alpha * alpha * c * s + s2 / 4.0, 0.0));
        assert!(close(gm.entry(2, 4), -s2 / 4.0, 0.0));
        assert!(close(gm.entry(1, 4), 0.0, 0.0));
        assert!(close(gm.entry(2, 3), 0.0, 0.0));

        // The printed expansion carries Im G_12 = Im G_34 = -1/4.
        assert!(close(gm.entry(1, 2), 0.0, -0.25));
        assert!(close(gm.entry(3, 4), 0.0, -0.25));
    }

    #[test]
    fn paper_gram_is_psd() {
        for &(alpha, g) in &[(0.0, 0.0), (1.0, 0.5), (2.5, 1.5)] {
            let gm = paper_gram(alpha, g).unwrap();
            assert!(gm.min_eigenvalue() > -1e-10, "alpha={alpha} g={g}");
        }
    }

    #[test]
    fn gaussian_gram_commutators_fix_the_imaginary_sign() {
        // First principles force Im G_12 = Im G_34 = +1/4 regardless of
        // phases: the sign comes from [Q, P] = i/2 alone.
        for theta_g in [0.0, FRAC_PI_2, 1.1] {
            for theta_alpha in [0.0, FRAC_PI_2] {
                let config = ModelConfig::new(0.8, 0.4)
                    .with_theta_g(theta_g)
                    .with_theta_alpha(theta_alpha);
                let gm = gaussian_gram(&config).unwrap();
                assert!((gm.entry(1, 2).im - 0.25).abs() < TOL);
                assert!((gm.entry(3, 4).im - 0.25).abs() < TOL);
            }
        }
    }

    #[test]
    fn gaussian_gram_matches_paper_at_the_reconciled_convention() {
        // theta_g = 0, theta_alpha = pi/2, kappa = 1/2, with the psi_2 and
        // psi_4 rows of the printed expansion sign-flipped.
        for &(alpha, g) in &[(0.0, 0.0), (1.0, 0.3), (1.7, 0.9)] {
            let config = ModelConfig::new(alpha, g)
                .with_theta_g(0.0)
                .with_theta_alpha(FRAC_PI_2);
            let gauss = gaussian_gram(&config).unwrap();
            let flipped = paper_gram(alpha, g).unwrap().with_derivative_signs(&[1, -1, 1, -1]);
            let dev = gauss.max_abs_diff(&flipped);
            assert!(dev < 1e-12, "alpha={alpha} g={g}: dev={dev:.3e}");
        }
    }

    #[test]
    fn gaussian_gram_at_default_convention_moves_overlap_slots() {
        // At theta_g = pi/2, theta_alpha = 0 the nonzero state overlaps are
        // G_02 = i alpha cosh g and G_03 = i alpha sinh g instead of the
        // published (G_01, G_03) pattern; reconciliation hinges on this.
        let (alpha, g) = (1.0, 0.5);
        let gm = gaussian_gram(&ModelConfig::new(alpha, g)).unwrap();
        assert!(gm.entry(0, 1).norm() < TOL);
        assert!(gm.entry(0, 4).norm() < TOL);
        assert!((gm.entry(0, 2) - C64::new(0.0, alpha * g.cosh())).norm() < TOL);
        assert!((gm.entry(0, 3) - C64::new(0.0, alpha * g.sinh())).norm() < TOL);
    }

    #[test]
    fn state_row_is_normalized_or_rejected() {
        let mut a = paper_coefficients(1.0, 0.2);
        a[(0, 0)] = C64::new(1.1, 0.0);
        assert!(PureModelGram::new(a.conjugate() * a.transpose()).is_err());
    }

    #[test]
    fn gram_json_roundtrip_keeps_every_entry() {
        let gm = paper_gram(1.4, 0.9).unwrap();
        let text = serde_json::to_string(&gm).unwrap();
        assert!(text.contains("entries"));
        let back: PureModelGram = serde_json::from_str(&text).unwrap();
        assert!(gm.max_abs_diff(&back) < 1e-15);
    }

    #[test]
    fn sign_flips_leave_diagonal_alone() {
        let gm = paper_gram(1.0, 0.7).unwrap();
        let flipped = gm.with_derivative_signs(&[-1, -1, -1, -1]);
        for j in 0..5 {
            assert_eq!(gm.entry(j, j), flipped.entry(j, j));
        }
        assert_eq!(flipped.entry(0, 1), -gm.entry(0, 1));
    }
}
