//! Quantum Fisher information matrix of the pure model and the SLD
//! Cramer-Rao bound Tr(Q^-1).

use crate::error::{Error, Result};
use crate::model::OrthonormalFrame;
use nalgebra::DMatrix;

/// Relative eigenvalue cutoff below which the QFIM counts as singular.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Q_jk = 4 Re[<psi_j|psi_k> - <psi_j|psi_0><psi_0|psi_k>].
pub fn qfim_pure(frame: &OrthonormalFrame) -> DMatrix<f64> {
    frame.qfim()
}

/// Tr(Q^-1), the scalar SLD bound on the summed per-shot variances.
pub fn sld_crb(qfim: &DMatrix<f64>) -> Result<f64> {
    assert_eq!(qfim.nrows(), qfim.ncols(), "QFIM must be square");
    let eig = qfim.clone().symmetric_eigen().eigenvalues;
    let lmax = eig.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let lmin = eig.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if lmin <= SINGULAR_TOL * lmax.max(1.0) {
        return Err(Error::NotIdentifiable(format!(
            "QFIM is singular (min eigenvalue {lmin:.3e}, max {lmax:.3e})"
        )));
    }
    Ok(eig.iter().map(|l| 1.0 / l).sum())
}
