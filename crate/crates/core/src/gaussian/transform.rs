//! Affine symplectic maps r -> S r + d.
//!
//! Quadrature ordering: r = (q1, p1, q2, p2, ...).

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

use super::{omega, GaussianState};

/// How far a matrix may drift from S Omega S^T = Omega before construction fails.
pub const SYMPLECTIC_TOL: f64 = 1e-12;

/// Affine symplectic transform: mean -> S mean + d, cov -> S cov S^T.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    s: DMatrix<f64>,
    d: DVector<f64>,
}

impl SymplecticTransform {
    pub fn new(s: DMatrix<f64>, d: DVector<f64>) -> Result<Self> {
        if s.nrows() != s.ncols() || !s.nrows().is_multiple_of(2) || s.nrows() == 0 {
            return Err(Error::invalid("transform", format!("matrix is {}x{}", s.nrows(), s.ncols())));
        }
        if d.len() != s.nrows() {
            return Err(Error::invalid(
                "transform",
                format!("shift length {} does not match matrix dimension {}", d.len(), s.nrows()),
            ));
        }
        let t = SymplecticTransform { s, d };
        let defect = t.symplectic_defect();
        if defect > SYMPLECTIC_TOL {
            return Err(Error::invalid(
                "transform",
                format!("S Omega S^T deviates from Omega by {defect:.3e}"),
            ));
        }
        Ok(t)
    }

    pub fn identity(n_modes: usize) -> Self {
        SymplecticTransform {
            s: DMatrix::identity(2 * n_modes, 2 * n_modes),
            d: DVector::zeros(2 * n_modes),
        }
    }

    /// Pure displacement (S = I).
    pub fn displacement(d: DVector<f64>) -> Result<Self> {
        if !d.len().is_multiple_of(2) || d.is_empty() {
            return Err(Error::invalid("transform", format!("shift length {}", d.len())));
        }
        let n = d.len();
        Ok(SymplecticTransform { s: DMatrix::identity(n, n), d })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.s
    }

    pub fn shift(&self) -> &DVector<f64> {
        &self.d
    }

    pub fn n_modes(&self) -> usize {
        self.s.nrows() / 2
    }

    /// Max-abs entry of S Omega S^T - Omega.
    pub fn symplectic_defect(&self) -> f64 {
        let w = omega(self.n_modes());
        (&self.s * &w * self.s.transpose() - w).abs().max()
    }

    pub fn apply(&self, state: &GaussianState) -> GaussianState {
        assert_eq!(state.n_modes(), self.n_modes(), "mode count mismatch");
        let mean = &self.s * state.mean() + &self.d;
        let cov = &self.s * state.cov() * self.s.transpose();
        // Symplectic images of valid states are valid; re-symmetrize to keep
        // round-off from accumulating across pipeline stages.
        let cov = (&cov + cov.transpose()) * 0.5;
        GaussianState::new(mean, cov).expect("symplectic image of a valid state")
    }

    /// `self` followed by `after` (i.e. after o self).
    pub fn then(&self, after: &SymplecticTransform) -> SymplecticTransform {
        assert_eq!(self.n_modes(), after.n_modes(), "mode count mismatch");
        SymplecticTransform {
            s: &after.s * &self.s,
            d: &after.s * &self.d + &after.d,
        }
    }
}
