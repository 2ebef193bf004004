//! Emitter at φ = 0 whose reflected coherent drive is cancelled on a
//! beam splitter by a second field β, leaving the mode `d = i r L`.

use log::warn;

use super::cancellation::residual_phasor;
use super::guard::check_anharmonicity;
use crate::dynamics::{effective_coupling, DriveSchedule, Evolution, Levels, MirrorQubitParams, PhaseSchedule};
use crate::error::{Error, Result};
use crate::quantum::{DensityMatrix, Operator, C64};
use crate::statistics::{photon_statistics, CountingOptions, PhotonStatistics};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitterConfig {
    /// Reflection coefficient r ∈ [0, 1].
    pub r: f64,
    pub alpha0: f64,
    /// Pulse start t₀, also the start of the counting window.
    pub t0: f64,
    pub t_end: f64,
    pub phi: f64,
    /// Relative amplitude error of β (0 for exact cancellation).
    pub beta_amplitude_error: f64,
    /// Phase error of β in radians.
    pub beta_phase_error: f64,
    pub anharmonicity: f64,
}

impl Default for BeamSplitterConfig {
    fn default() -> Self {
        Self {
            r: 0.995,
            alpha0: 5.0,
            t0: 1.0,
            t_end: 20.0,
            phi: 0.0,
            beta_amplitude_error: 0.0,
            beta_phase_error: 0.0,
            anharmonicity: super::DEFAULT_ANHARMONICITY,
        }
    }
}

impl BeamSplitterConfig {
    pub fn new(r: f64, alpha0: f64) -> Result<Self> {
        let cfg = Self {
            r,
            alpha0,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// τ = √(1 − r²).
    pub fn tau(&self) -> f64 {
        (1.0 - self.r * self.r).max(0.0).sqrt()
    }

    /// β = −i r α_in / τ, the field that cancels the reflected drive.
    pub fn beta(&self, alpha_in: C64) -> Option<C64> {
        let tau = self.tau();
        (tau > 0.0).then(|| C64::new(0.0, -self.r) * alpha_in / tau)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.r) {
            return Err(Error::InvalidParameter {
                name: "r",
                reason: format!("reflection coefficient must lie in [0, 1], got {}", self.r),
            });
        }
        if !(self.alpha0 >= 0.0 && self.alpha0.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "alpha0",
                reason: format!("drive amplitude must be finite and non-negative, got {}", self.alpha0),
            });
        }
        if !(self.t0 >= 0.0 && self.t0 < self.t_end) {
            return Err(Error::InvalidParameter {
                name: "t_end",
                reason: format!("need 0 <= t0 < t_end, got t0 = {}, t_end = {}", self.t0, self.t_end),
            });
        }
        Ok(())
    }
}

pub(crate) fn pulse_or_none(alpha0: f64, t0: f64, gamma_eff: f64) -> Result<DriveSchedule> {
    if alpha0 == 0.0 {
        Ok(DriveSchedule::none())
    } else {
        DriveSchedule::pi_pulse(C64::new(alpha0, 0.0), t0, gamma_eff)
    }
}

pub(crate) fn require_qubit(params: &MirrorQubitParams) -> Result<()> {
    if params.levels != Levels::Two {
        return Err(Error::InvalidParameter {
            name: "levels",
            reason: "this scenario needs a two-level emitter".into(),
        });
    }
    Ok(())
}

/// Evolution whose single output is the beam-splitter mode d.
pub fn beam_splitter_evolution(params: &MirrorQubitParams, config: &BeamSplitterConfig) -> Result<Evolution> {
    config.validate()?;
    require_qubit(params)?;
    let gamma_eff = effective_coupling(params.gamma, config.phi);
    check_anharmonicity(config.alpha0, gamma_eff, config.anharmonicity);
    let drive = pulse_or_none(config.alpha0, config.t0, gamma_eff)?;
    let ev = Evolution::build(
        params,
        &drive,
        &PhaseSchedule::constant(config.phi),
        DensityMatrix::basis(2, 0),
        (0.0, config.t_end),
        &[config.t0],
    )?;
    let r = config.r;
    let leak = residual_phasor(1.0 + config.beta_amplitude_error, config.beta_phase_error);
    if leak.norm() > 0.0 {
        warn!("beta mismatch leaves coherent leakage factor {:.3e} in mode d", leak.norm());
    }
    Ok(ev.with_outputs(move |seg| {
        let d = seg.outputs()[0].scale(C64::new(0.0, r));
        let offset = C64::new(0.0, r) * seg.alpha * leak;
        if offset.norm() == 0.0 {
            vec![d]
        } else {
            vec![&d + &Operator::identity(2).scale(offset)]
        }
    }))
}

/// Photon statistics of mode d over `[t₀, T]`.
pub fn run_beam_splitter(
    params: &MirrorQubitParams,
    config: &BeamSplitterConfig,
    options: &CountingOptions,
) -> Result<PhotonStatistics> {
    let ev = beam_splitter_evolution(params, config)?;
    photon_statistics(&ev, 0, (config.t0, config.t_end), options)
}
