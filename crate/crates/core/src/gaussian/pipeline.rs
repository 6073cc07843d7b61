//! The optical chain: coherent + vacuum input, nondegenerate squeezer,
//! displacement encoding, 50:50 beam splitter.
//!
//! Quadrature ordering: r = (q1, p1, q2, p2).

use crate::error::{Error, Result};
use crate::ModelConfig;
use nalgebra::{DMatrix, DVector};

use super::{GaussianState, QuadratureConvention, SymplecticTransform};

/// Mode 1 in the coherent state alpha e^{i theta_alpha}, mode 2 vacuum.
pub fn make_input_state(alpha: f64, theta_alpha: f64) -> Result<GaussianState> {
    if !alpha.is_finite() || !theta_alpha.is_finite() {
        return Err(Error::invalid("input state", "alpha and theta_alpha must be finite"));
    }
    let mean = DVector::from_vec(vec![
        alpha * theta_alpha.cos(),
        alpha * theta_alpha.sin(),
        0.0,
        0.0,
    ]);
    Ok(GaussianState::new(mean, DMatrix::identity(4, 4) * super::VACUUM_VARIANCE)
        .expect("coherent state moments are valid"))
}

/// Nondegenerate (two-mode) squeezer with gain g and pump phase theta_g.
///
/// Heisenberg action on quadratures:
///   Q1 -> cosh g Q1 - sinh g (cos th Q2 + sin th P2)
///   P1 -> cosh g P1 - sinh g (sin th Q2 - cos th P2)
/// and symmetrically on mode 2. At theta_g = pi/2 this is the familiar
/// Q1 - P2 / P1 - Q2 coupling; at theta_g = 0 it squeezes Q1 - Q2 and P1 + P2.
pub fn two_mode_squeezer(g: f64, theta_g: f64) -> Result<SymplecticTransform> {
    if !g.is_finite() || !theta_g.is_finite() {
        return Err(Error::invalid("squeezer", "g and theta_g must be finite"));
    }
    let (c, s) = (g.cosh(), g.sinh());
    let (ct, st) = (theta_g.cos(), theta_g.sin());
    // Block form [[c I, -s M], [-s M, c I]] with M = [[ct, st], [st, -ct]];
    // M is symmetric with M^2 = I, which makes S symplectic for every theta_g.
    let s_mat = DMatrix::from_row_slice(4, 4, &[
        c, 0.0, -s * ct, -s * st,
        0.0, c, -s * st, s * ct,
        -s * ct, -s * st, c, 0.0,
        -s * st, s * ct, 0.0, c,
    ]);
    SymplecticTransform::new(s_mat, DVector::zeros(4))
}

/// Balanced beam splitter: mode1 -> (mode1 - mode2)/sqrt2,
/// mode2 -> (mode1 + mode2)/sqrt2.
pub fn beam_splitter_5050() -> SymplecticTransform {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let s = DMatrix::from_row_slice(4, 4, &[
        r, 0.0, -r, 0.0,
        0.0, r, 0.0, -r,
        r, 0.0, r, 0.0,
        0.0, r, 0.0, r,
    ]);
    SymplecticTransform::new(s, DVector::zeros(4)).expect("balanced beam splitter is symplectic")
}

/// Displacement encoding: theta = (th1, th2, th3, th4) shifts
/// (q1, p1, q2, p2) by kappa * theta.
pub fn encode_displacements(conv: &QuadratureConvention, theta: &[f64; 4]) -> Result<SymplecticTransform> {
    if theta.iter().any(|t| !t.is_finite()) {
        return Err(Error::invalid("theta", "displacement parameters must be finite"));
    }
    let k = conv.displacement_gain();
    SymplecticTransform::displacement(DVector::from_vec(theta.iter().map(|t| k * t).collect()))
}

/// States after each stage of the chain.
#[derive(Debug, Clone)]
pub struct PipelineStages {
    pub input: GaussianState,
    pub squeezed: GaussianState,
    pub encoded: GaussianState,
    pub output: GaussianState,
}

impl PipelineStages {
    pub const NAMES: [&'static str; 4] = ["input", "squeezed", "encoded", "output"];

    pub fn stages(&self) -> [(&'static str, &GaussianState); 4] {
        [
            ("input", &self.input),
            ("squeezed", &self.squeezed),
            ("encoded", &self.encoded),
            ("output", &self.output),
        ]
    }
}

/// Runs input -> squeezer -> encoding -> beam splitter and keeps every
/// intermediate state.
pub fn propagate_pipeline(config: &ModelConfig, theta: &[f64; 4]) -> Result<PipelineStages> {
    config.validate()?;
    let conv = config.convention()?;
    let input = make_input_state(config.alpha, config.theta_alpha)?;
    let squeezed = two_mode_squeezer(config.g, config.theta_g)?.apply(&input);
    let encoded = encode_displacements(&conv, theta)?.apply(&squeezed);
    let output = beam_splitter_5050().apply(&encoded);
    Ok(PipelineStages { input, squeezed, encoded, output })
}
