//! Quantum-limited bounds for multiparameter displacement estimation with a
//! two-mode squeezed probe.
//!
//! The crate models the full optical chain in phase space (coherent + vacuum
//! input, nondegenerate squeezer, displacement encoding, 50:50 beam splitter,
//! homodyne/heterodyne readout), builds the pure-state model from either the
//! published basis expansion or the Gaussian pipeline, and evaluates the
//! scalar SLD Cramer-Rao and Holevo Cramer-Rao bounds together with the
//! classical Fisher information of concrete measurement schemes.
//!
//! Quadrature ordering everywhere: r = (q1, p1, q2, p2) with Q = (a + a')/2,
//! P = (a - a')/2i, so [Q, P] = i/2 and the vacuum variance is 1/4.

pub mod error;
pub mod gaussian;
pub mod model;
pub mod bounds;
pub mod measurement;
pub mod report;

pub use error::{Error, Result};

use std::f64::consts::FRAC_PI_2;

/// Displacement gains kappa that keep the encoding unitary's generator in the
/// conventions used across the literature on this receiver.
pub const ALLOWED_GAINS: [f64; 3] = [0.5, std::f64::consts::FRAC_1_SQRT_2, 1.0];

/// Number of encoded displacement parameters (q and p of both modes).
pub const PARAM_COUNT: usize = 4;

/// Physical configuration of the probe/encoding chain.
///
/// `theta_alpha` is the coherent-seed phase, `theta_g` the squeezer phase,
/// `kappa` the displacement gain (shift per unit parameter).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelConfig {
    pub alpha: f64,
    pub theta_alpha: f64,
    pub g: f64,
    pub theta_g: f64,
    pub kappa: f64,
    /// Parameter count; the displacement encoding fixes this to 4.
    pub d: usize,
}

impl ModelConfig {
    /// Defaults used throughout: coherent phase 0, squeezer phase pi/2,
    /// gain 1/2.
    pub fn new(alpha: f64, g: f64) -> Self {
        ModelConfig {
            alpha,
            theta_alpha: 0.0,
            g,
            theta_g: FRAC_PI_2,
            kappa: 0.5,
            d: PARAM_COUNT,
        }
    }

    pub fn with_theta_g(mut self, theta_g: f64) -> Self {
        self.theta_g = theta_g;
        self
    }

    pub fn with_theta_alpha(mut self, theta_alpha: f64) -> Self {
        self.theta_alpha = theta_alpha;
        self
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || self.alpha < 0.0 {
            return Err(Error::invalid("alpha", format!("{} (must be finite and >= 0)", self.alpha)));
        }
        if !self.g.is_finite() || self.g < 0.0 {
            return Err(Error::invalid("g", format!("{} (must be finite and >= 0)", self.g)));
        }
        if !self.theta_alpha.is_finite() || !self.theta_g.is_finite() {
            return Err(Error::invalid("phase", "theta_alpha and theta_g must be finite".to_string()));
        }
        if !ALLOWED_GAINS.iter().any(|k| (k - self.kappa).abs() < 1e-12) {
            return Err(Error::invalid(
                "kappa",
                format!("{} (allowed: 1/2, 1/sqrt(2), 1)", self.kappa),
            ));
        }
        if self.d != PARAM_COUNT {
            return Err(Error::invalid("d", format!("{} (the displacement model has 4 parameters)", self.d)));
        }
        Ok(())
    }

    pub fn convention(&self) -> Result<gaussian::QuadratureConvention> {
        gaussian::QuadratureConvention::with_gain(self.kappa)
    }
}
