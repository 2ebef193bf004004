use crate::error::{Error, Result};

/// Line couplings of a three-level ladder, in units of Γ₀₁.
///
/// Each transition couples to the mirror-terminated line like the qubit does,
/// so its output rate at phase φ is `Γ_ab (1 + cos φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderRates {
    pub gamma01: f64,
    pub gamma12: f64,
    pub gamma02: f64,
}

impl LadderRates {
    /// Transmon-like defaults: Γ₁₂ = 2Γ₀₁, Γ₀₂ = Γ₀₁/20.
    pub fn transmon() -> Self {
        Self {
            gamma01: 1.0,
            gamma12: 2.0,
            gamma02: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Levels {
    Two,
    Three(LadderRates),
}

/// Physical parameters of the driven emitter in front of a mirror.
///
/// Only the detuning `Δ = ω₀₁ − ω_d` and the round-trip phase φ enter the
/// model; bare frequencies never appear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorQubitParams {
    /// Full-line decay rate Γ; sets the unit.
    pub gamma: f64,
    pub delta: f64,
    /// Decay into channels other than the line.
    pub gamma_nr: f64,
    pub levels: Levels,
}

impl Default for MirrorQubitParams {
    fn default() -> Self {
        Self::qubit(1.0)
    }
}

impl MirrorQubitParams {
    pub fn qubit(gamma: f64) -> Self {
        Self {
            gamma,
            delta: 0.0,
            gamma_nr: 0.0,
            levels: Levels::Two,
        }
    }

    /// Qubit whose coupling at φ = 0 equals `gamma_eff` (Γ = Γ_eff / 2).
    pub fn qubit_with_effective_coupling(gamma_eff: f64) -> Self {
        Self::qubit(gamma_eff / 2.0)
    }

    pub fn ladder(rates: LadderRates) -> Self {
        Self {
            gamma: rates.gamma01,
            delta: 0.0,
            gamma_nr: 0.0,
            levels: Levels::Three(rates),
        }
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_gamma_nr(mut self, gamma_nr: f64) -> Self {
        self.gamma_nr = gamma_nr;
        self
    }

    pub fn dim(&self) -> usize {
        match self.levels {
            Levels::Two => 2,
            Levels::Three(_) => 3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let rate = |name: &'static str, v: f64| -> Result<()> {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("rate must be finite and non-negative, got {v}"),
                });
            }
            Ok(())
        };
        rate("gamma", self.gamma)?;
        rate("gamma_nr", self.gamma_nr)?;
        if !self.delta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "delta",
                reason: "detuning must be finite".into(),
            });
        }
        if let Levels::Three(r) = self.levels {
            rate("gamma01", r.gamma01)?;
            rate("gamma12", r.gamma12)?;
            rate("gamma02", r.gamma02)?;
            if self.gamma_nr > 0.0 {
                return Err(Error::InvalidParameter {
                    name: "gamma_nr",
                    reason: "non-radiative decay is only modelled for the two-level emitter".into(),
                });
            }
        }
        Ok(())
    }
}
