//! Gaussian states as (mean, covariance) pairs, plus 1-sigma ellipse geometry.
//!
//! Quadrature ordering: r = (q1, p1, q2, p2, ...); vacuum variance 1/4.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector, Matrix2, Vector2};

use super::omega;

/// Gaussian state of `n` modes: mean vector (length 2n) and symmetrized
/// covariance matrix (2n x 2n).
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Validates shape, symmetry and the uncertainty relation
    /// cov + (i/4) Omega >= 0 (all symplectic eigenvalues >= 1/4).
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::invalid("state", format!("phase-space dimension {dim} is not even")));
        }
        if cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::invalid(
                "state",
                format!("covariance is {}x{}, mean has length {dim}", cov.nrows(), cov.ncols()),
            ));
        }
        let asym = (&cov - cov.transpose()).abs().max();
        if asym > 1e-10 {
            return Err(Error::invalid("state", format!("covariance asymmetry {asym:.3e}")));
        }
        let state = GaussianState { mean, cov };
        let nu_min = state
            .symplectic_eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if nu_min < 0.25 - 1e-9 {
            return Err(Error::invalid(
                "state",
                format!("uncertainty relation violated: min symplectic eigenvalue {nu_min:.6} < 1/4"),
            ));
        }
        Ok(state)
    }

    pub fn vacuum(n_modes: usize) -> Self {
        GaussianState {
            mean: DVector::zeros(2 * n_modes),
            cov: DMatrix::identity(2 * n_modes, 2 * n_modes) * super::VACUUM_VARIANCE,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Symplectic eigenvalues: the moduli of the (purely imaginary) eigenvalue
    /// pairs of Omega * cov, one per mode, in descending order.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        let n = self.n_modes();
        let oc = omega(n) * &self.cov;
        let mut nus: Vec<f64> = oc.complex_eigenvalues().iter().map(|l| l.im.abs()).collect();
        nus.sort_by(|a, b| b.partial_cmp(a).unwrap());
        // Eigenvalues come in +/- i nu pairs; keep one representative of each.
        nus.into_iter().step_by(2).collect()
    }

    /// A state is pure iff every symplectic eigenvalue sits at the vacuum 1/4.
    pub fn is_pure(&self, tol: f64) -> bool {
        self.symplectic_eigenvalues().iter().all(|nu| (nu - 0.25).abs() <= tol)
    }

    pub fn purity(&self) -> f64 {
        self.symplectic_eigenvalues().iter().map(|nu| 0.25 / nu).product()
    }

    pub fn mode_marginal(&self, mode: usize) -> (Vector2<f64>, Matrix2<f64>) {
        assert!(mode < self.n_modes(), "mode {mode} out of range");
        let i = 2 * mode;
        let mean = Vector2::new(self.mean[i], self.mean[i + 1]);
        let cov = Matrix2::new(
            self.cov[(i, i)],
            self.cov[(i, i + 1)],
            self.cov[(i + 1, i)],
            self.cov[(i + 1, i + 1)],
        );
        (mean, cov)
    }

    pub fn ellipse(&self, mode: usize) -> PhaseSpaceEllipse {
        let (mean, cov) = self.mode_marginal(mode);
        PhaseSpaceEllipse::from_moments(mean, cov)
    }
}

/// 1-sigma covariance ellipse of a single-mode marginal.
///
/// `angle` is the major-axis direction in radians, normalized to [0, pi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceEllipse {
    pub center_q: f64,
    pub center_p: f64,
    pub semi_major: f64,
    pub semi_minor: f64,
    pub angle: f64,
}

impl PhaseSpaceEllipse {
    pub fn from_moments(mean: Vector2<f64>, cov: Matrix2<f64>) -> Self {
        let (a, b, c) = (cov[(0, 0)], cov[(1, 1)], 0.5 * (cov[(0, 1)] + cov[(1, 0)]));
        let half_tr = 0.5 * (a + b);
        let disc = (0.25 * (a - b) * (a - b) + c * c).sqrt();
        let l_max = (half_tr + disc).max(0.0);
        let l_min = (half_tr - disc).max(0.0);
        let mut angle = if disc < 1e-300 {
            0.0 // isotropic: direction is arbitrary, pick q axis
        } else {
            0.5 * (2.0 * c).atan2(a - b)
        };
        if angle < 0.0 {
            angle += std::f64::consts::PI;
        }
        if angle >= std::f64::consts::PI {
            angle -= std::f64::consts::PI;
        }
        PhaseSpaceEllipse {
            center_q: mean[0],
            center_p: mean[1],
            semi_major: l_max.sqrt(),
            semi_minor: l_min.sqrt(),
            angle,
        }
    }
}
