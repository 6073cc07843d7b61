//! Homodyne / heterodyne readout of the pipeline output as a linear Gaussian
//! outcome model.
//!
//! Quadrature ordering: r = (q1, p1, q2, p2).

use crate::error::{Error, Result};
use crate::ModelConfig;
use nalgebra::{DMatrix, DVector};

use super::{beam_splitter_5050, propagate_pipeline};

/// What a single detector chain extracts from one output mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelKind {
    /// Homodyne of the rotated quadrature cos(angle) q + sin(angle) p.
    Quadrature { angle: f64 },
    /// Balanced double homodyne of the mode: both q and p, each reading
    /// paying one unit of vacuum noise (variance 1/4) on top of the state.
    Heterodyne,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SettingChannel {
    pub mode: usize,
    pub kind: ChannelKind,
}

/// One simultaneously-measured detector configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSetting {
    pub channels: Vec<SettingChannel>,
}

/// A randomized measurement strategy: settings interleaved with the given
/// probability weights (nonnegative, summing to one).
#[derive(Debug, Clone, PartialEq)]
pub struct DualHomodyneScheme {
    pub name: String,
    pub settings: Vec<(f64, MeasurementSetting)>,
}

impl DualHomodyneScheme {
    /// Both output modes read out with balanced double homodyne.
    pub fn heterodyne() -> Self {
        DualHomodyneScheme {
            name: "heterodyne".into(),
            settings: vec![(
                1.0,
                MeasurementSetting {
                    channels: vec![
                        SettingChannel { mode: 0, kind: ChannelKind::Heterodyne },
                        SettingChannel { mode: 1, kind: ChannelKind::Heterodyne },
                    ],
                },
            )],
        }
    }

    fn both_quadratures(name: &str, angle0: f64, angle1: f64) -> Self {
        DualHomodyneScheme {
            name: name.into(),
            settings: vec![(
                1.0,
                MeasurementSetting {
                    channels: vec![
                        SettingChannel { mode: 0, kind: ChannelKind::Quadrature { angle: angle0 } },
                        SettingChannel { mode: 1, kind: ChannelKind::Quadrature { angle: angle1 } },
                    ],
                },
            )],
        }
    }

    /// q on both modes.
    pub fn both_q() -> Self {
        Self::both_quadratures("qq", 0.0, 0.0)
    }

    /// p on both modes.
    pub fn both_p() -> Self {
        let h = std::f64::consts::FRAC_PI_2;
        Self::both_quadratures("pp", h, h)
    }

    /// q on mode 1, p on mode 2.
    pub fn q1_p2() -> Self {
        Self::both_quadratures("qp", 0.0, std::f64::consts::FRAC_PI_2)
    }

    /// p on mode 1, q on mode 2.
    pub fn p1_q2() -> Self {
        Self::both_quadratures("pq", std::f64::consts::FRAC_PI_2, 0.0)
    }

    /// The low-noise axes of the output modes at pump phase pi/2:
    /// mode 1 is squeezed along -45 degrees, mode 2 along +45 degrees.
    pub fn squeezed_axes() -> Self {
        let q = std::f64::consts::FRAC_PI_4;
        Self::both_quadratures("squeezed", -q, q)
    }

    /// Alternate qq and pp settings with equal probability.
    pub fn alternating_qq_pp() -> Self {
        let qq = Self::both_q().settings.remove(0).1;
        let pp = Self::both_p().settings.remove(0).1;
        DualHomodyneScheme {
            name: "alternate".into(),
            settings: vec![(0.5, qq), (0.5, pp)],
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        match id {
            "heterodyne" => Ok(Self::heterodyne()),
            "qq" => Ok(Self::both_q()),
            "pp" => Ok(Self::both_p()),
            "qp" => Ok(Self::q1_p2()),
            "pq" => Ok(Self::p1_q2()),
            "squeezed" => Ok(Self::squeezed_axes()),
            "alternate" => Ok(Self::alternating_qq_pp()),
            other => Err(Error::invalid(
                "scheme",
                format!("unknown id {other:?} (try heterodyne, qq, pp, qp, pq, squeezed, alternate)"),
            )),
        }
    }

    pub const IDS: [&'static str; 7] = ["heterodyne", "qq", "pp", "qp", "pq", "squeezed", "alternate"];

    pub fn validate(&self, n_modes: usize) -> Result<()> {
        if self.settings.is_empty() {
            return Err(Error::invalid("scheme", "no measurement settings"));
        }
        let wsum: f64 = self.settings.iter().map(|(w, _)| *w).sum();
        if self.settings.iter().any(|(w, _)| !w.is_finite() || *w < 0.0) || (wsum - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(
                "scheme",
                format!("setting weights must be nonnegative and sum to 1 (sum = {wsum})"),
            ));
        }
        for (_, setting) in &self.settings {
            if setting.channels.is_empty() {
                return Err(Error::invalid("scheme", "empty measurement setting"));
            }
            for (i, a) in setting.channels.iter().enumerate() {
                if a.mode >= n_modes {
                    return Err(Error::invalid("scheme", format!("mode {} out of range", a.mode)));
                }
                if let ChannelKind::Quadrature { angle } = a.kind {
                    if !angle.is_finite() {
                        return Err(Error::invalid("scheme", "non-finite quadrature angle"));
                    }
                }
                for b in &setting.channels[i + 1..] {
                    if a.mode != b.mode {
                        continue;
                    }
                    match (a.kind, b.kind) {
                        (ChannelKind::Quadrature { angle: t1 }, ChannelKind::Quadrature { angle: t2 }) => {
                            let d = (t1 - t2).rem_euclid(std::f64::consts::PI);
                            if d > 1e-9 && (std::f64::consts::PI - d) > 1e-9 {
                                return Err(Error::invalid(
                                    "scheme",
                                    format!(
                                        "mode {} measures non-commuting quadratures ({t1} and {t2}) \
                                         in one setting; use a heterodyne channel to split the mode",
                                        a.mode
                                    ),
                                ));
                            }
                            return Err(Error::invalid(
                                "scheme",
                                format!("mode {} is measured twice in one setting", a.mode),
                            ));
                        }
                        _ => {
                            return Err(Error::invalid(
                                "scheme",
                                format!("mode {} is measured twice in one setting", a.mode),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Gaussian outcome statistics of one setting: outcomes are Gaussian with
/// mean `jacobian * theta` + offset and parameter-independent covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearGaussianOutcomeModel {
    /// d(mean)/d(theta), one row per measured channel.
    pub jacobian: DMatrix<f64>,
    /// Outcome offset at theta = 0.
    pub offset: DVector<f64>,
    /// Outcome covariance (includes heterodyne vacuum penalties).
    pub covariance: DMatrix<f64>,
    pub labels: Vec<String>,
}

/// Outcome models of all settings of a scheme, with their weights.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeModel {
    pub name: String,
    pub parts: Vec<(f64, LinearGaussianOutcomeModel)>,
}

impl OutcomeModel {
    pub fn single(&self) -> Option<&LinearGaussianOutcomeModel> {
        if self.parts.len() == 1 {
            Some(&self.parts[0].1)
        } else {
            None
        }
    }
}

fn channel_label(ch: &SettingChannel) -> Vec<String> {
    let m = ch.mode + 1;
    match ch.kind {
        ChannelKind::Quadrature { angle } => {
            if angle.abs() < 1e-12 {
                vec![format!("q{m}")]
            } else if (angle - std::f64::consts::FRAC_PI_2).abs() < 1e-12 {
                vec![format!("p{m}")]
            } else {
                vec![format!("x{m}@{angle:.6}")]
            }
        }
        ChannelKind::Heterodyne => vec![format!("q{m}+noise"), format!("p{m}+noise")],
    }
}

/// Builds the linear Gaussian outcome model of `scheme` applied to the
/// pipeline output.
///
/// Outcome means are kappa * V * S_bs * theta + offset where V stacks the
/// measured quadrature directions; heterodyne channels add one vacuum unit
/// (1/4) to their own outcome variance.
pub fn homodyne_outcome_model(config: &ModelConfig, scheme: &DualHomodyneScheme) -> Result<OutcomeModel> {
    config.validate()?;
    scheme.validate(2)?;
    let stages = propagate_pipeline(config, &[0.0; 4])?;
    let out = &stages.output;
    let s_bs = beam_splitter_5050();
    let kappa = config.kappa;

    let mut parts = Vec::with_capacity(scheme.settings.len());
    for (w, setting) in &scheme.settings {
        let mut rows: Vec<DVector<f64>> = Vec::new();
        let mut penalties: Vec<f64> = Vec::new();
        let mut labels: Vec<String> = Vec::new();
        for ch in &setting.channels {
            let base = 2 * ch.mode;
            match ch.kind {
                ChannelKind::Quadrature { angle } => {
                    let mut v = DVector::zeros(4);
                    v[base] = angle.cos();
                    v[base + 1] = angle.sin();
                    rows.push(v);
                    penalties.push(0.0);
                }
                ChannelKind::Heterodyne => {
                    for off in 0..2 {
                        let mut v = DVector::zeros(4);
                        v[base + off] = 1.0;
                        rows.push(v);
                        penalties.push(super::VACUUM_VARIANCE);
                    }
                }
            }
            labels.extend(channel_label(ch));
        }
        let m = rows.len();
        let mut v_mat = DMatrix::zeros(m, 4);
        for (i, v) in rows.iter().enumerate() {
            v_mat.set_row(i, &v.transpose());
        }
        let jacobian = &v_mat * s_bs.matrix() * kappa;
        let offset = &v_mat * out.mean();
        let mut covariance = &v_mat * out.cov() * v_mat.transpose();
        for (i, p) in penalties.iter().enumerate() {
            covariance[(i, i)] += p;
        }
        parts.push((
            *w,
            LinearGaussianOutcomeModel { jacobian, offset, covariance, labels },
        ));
    }
    Ok(OutcomeModel { name: scheme.name.clone(), parts })
}
