//! Two-path coherent cancellation on a directional coupler.
//!
//! The output `d = τ₁A₁e^{i(ω₁t+φ₁+φ)} + τ₂A₂e^{i(ω₂t+φ₂)}` vanishes when
//! `τ₂A₂ = τ₁A₁`, `φ₂ = φ₁ + φ + (2n−1)π` and `ω₂ = ω₁`.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::quantum::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CancellationInputs {
    pub a1: f64,
    pub a2: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub omega1: f64,
    pub omega2: f64,
    /// Mirror round-trip phase.
    pub phi: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub n: i64,
}

impl CancellationInputs {
    /// Inputs meeting every cancellation condition exactly.
    pub fn matched(amplitude: f64, phi1: f64, phi: f64, omega: f64) -> Self {
        Self {
            a1: amplitude,
            a2: amplitude,
            phi1,
            phi2: phi1 + phi + PI,
            omega1: omega,
            omega2: omega,
            phi,
            tau1: 1.0,
            tau2: 1.0,
            n: 1,
        }
    }

    pub fn with_phase_error(mut self, delta: f64) -> Self {
        self.phi2 += delta;
        self
    }

    pub fn with_amplitude_ratio(mut self, ratio: f64) -> Self {
        self.a2 = self.a1 * ratio;
        self
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("a1", self.a1), ("a2", self.a2)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("amplitude must be finite and non-negative, got {v}"),
                });
            }
        }
        for (name, v) in [("tau1", self.tau1), ("tau2", self.tau2)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("transmission must lie in [0, 1], got {v}"),
                });
            }
        }
        if self.tau1 * self.a1 == 0.0 {
            return Err(Error::InvalidParameter {
                name: "a1",
                reason: "reference arm τ₁A₁ is zero".into(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CancellationResult {
    /// |d| / (τ₁A₁); for unequal frequencies the beat-envelope peak.
    pub residual: f64,
    pub residual_db: f64,
}

/// Amplitude and phase errors that each alone give a residual of `db`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBudget {
    pub residual_db: f64,
    pub amplitude_error: f64,
    pub phase_error: f64,
}

pub fn to_db(ratio: f64) -> f64 {
    20.0 * ratio.log10()
}

fn wrap_symmetric(x: f64) -> f64 {
    let w = (x + PI).rem_euclid(TAU) - PI;
    if w <= -PI {
        w + TAU
    } else {
        w
    }
}

/// |1 − ρe^{iδ}| = √((1−ρ)² + 4ρ sin²(δ/2)).
pub fn residual_factor(ratio: f64, phase_error: f64) -> f64 {
    ((1.0 - ratio).powi(2) + 4.0 * ratio * (0.5 * phase_error).sin().powi(2)).sqrt()
}

/// Complex leftover `1 − ρe^{iδ}` of a mismatched cancellation.
pub fn residual_phasor(ratio: f64, phase_error: f64) -> C64 {
    C64::new(1.0, 0.0) - C64::from_polar(ratio, phase_error)
}

pub fn cancellation_budget(inputs: &CancellationInputs) -> Result<CancellationResult> {
    inputs.validate()?;
    let ratio = inputs.tau2 * inputs.a2 / (inputs.tau1 * inputs.a1);
    let residual = if inputs.omega1 != inputs.omega2 {
        1.0 + ratio
    } else {
        let delta = wrap_symmetric(inputs.phi2 - inputs.phi1 - inputs.phi - PI);
        residual_factor(ratio, delta)
    };
    Ok(CancellationResult {
        residual,
        residual_db: to_db(residual),
    })
}

pub fn error_budget(residual_db: f64) -> ErrorBudget {
    let eps = 10f64.powf(residual_db / 20.0);
    ErrorBudget {
        residual_db,
        amplitude_error: eps,
        phase_error: 2.0 * (0.5 * eps).min(1.0).asin(),
    }
}
