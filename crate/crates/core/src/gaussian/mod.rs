//! Phase-space primitives for Gaussian states of a few optical modes.
//!
//! Quadrature ordering: r = (q1, p1, q2, p2, ...), Q = (a + a')/2,
//! P = (a - a')/2i, [Q, P] = i/2, vacuum variance 1/4.

mod state;
mod transform;
mod pipeline;
mod homodyne;

pub use state::{GaussianState, PhaseSpaceEllipse};
pub use transform::SymplecticTransform;
pub use pipeline::{
    beam_splitter_5050, encode_displacements, make_input_state, propagate_pipeline,
    two_mode_squeezer, PipelineStages,
};
pub use homodyne::{
    homodyne_outcome_model, ChannelKind, DualHomodyneScheme, LinearGaussianOutcomeModel,
    MeasurementSetting, OutcomeModel, SettingChannel,
};

use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Variance of each vacuum quadrature in this convention.
pub const VACUUM_VARIANCE: f64 = 0.25;

/// Fixes the scale conventions the rest of the crate relies on.
///
/// The vacuum variance is pinned at 1/4 by the quadrature normalization; the
/// displacement gain is the phase-space shift produced per unit of encoded
/// parameter and is restricted to the three scalings in [`crate::ALLOWED_GAINS`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConvention {
    vacuum_variance: f64,
    displacement_gain: f64,
}

impl QuadratureConvention {
    /// The default convention: gain 1/2, i.e. exp(i th2 Q - i th1 P) shifts
    /// (q, p) by (th1/2, th2/2).
    pub fn standard() -> Self {
        QuadratureConvention { vacuum_variance: VACUUM_VARIANCE, displacement_gain: 0.5 }
    }

    pub fn with_gain(kappa: f64) -> Result<Self> {
        if !crate::ALLOWED_GAINS.iter().any(|k| (k - kappa).abs() < 1e-12) {
            return Err(Error::invalid(
                "kappa",
                format!("{kappa} (allowed: 1/2, 1/sqrt(2), 1)"),
            ));
        }
        Ok(QuadratureConvention { vacuum_variance: VACUUM_VARIANCE, displacement_gain: kappa })
    }

    pub fn vacuum_variance(&self) -> f64 {
        self.vacuum_variance
    }

    pub fn displacement_gain(&self) -> f64 {
        self.displacement_gain
    }
}

impl Default for QuadratureConvention {
    fn default() -> Self {
        Self::standard()
    }
}

/// Symplectic form for `n_modes` modes: block diagonal [[0, 1], [-1, 0]].
pub fn omega(n_modes: usize) -> DMatrix<f64> {
    let mut w = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for m in 0..n_modes {
        w[(2 * m, 2 * m + 1)] = 1.0;
        w[(2 * m + 1, 2 * m)] = -1.0;
    }
    w
}
