//! Three-level ladder excited on 0-2 that relaxes through |1⟩, emitting a
//! correlated photon pair on the 1-2 and 0-1 transitions.

use rayon::prelude::*;

use super::beam_splitter::pulse_or_none;
use crate::dynamics::{effective_coupling, ladder, Evolution, LadderRates, MirrorQubitParams, PhaseSchedule};
use crate::error::{Error, Result};
use crate::quantum::DensityMatrix;
use crate::statistics::{cross_pair_result, CrossPairResult};

/// Idler: the 2→1 photon. Signal: the 1→0 photon.
pub const IDLER: usize = ladder::CHANNEL_12;
pub const SIGNAL: usize = ladder::CHANNEL_01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeConfig {
    pub rates: LadderRates,
    pub alpha_d: f64,
    pub t0: f64,
    pub t_end: f64,
    pub delta: f64,
}

impl Default for CascadeConfig {
    fn default() -> Self {
        Self {
            rates: LadderRates::transmon(),
            alpha_d: 5.0,
            t0: 1.0,
            t_end: 40.0,
            delta: 0.0,
        }
    }
}

impl CascadeConfig {
    pub fn new(rates: LadderRates, alpha_d: f64) -> Self {
        Self {
            rates,
            alpha_d,
            ..Self::default()
        }
    }

    pub fn params(&self) -> MirrorQubitParams {
        MirrorQubitParams::ladder(self.rates).with_delta(self.delta)
    }

    /// π-pulse width on the 0-2 channel at φ = 0.
    pub fn pulse_width(&self) -> Result<f64> {
        crate::dynamics::pi_pulse_width(self.alpha_d, effective_coupling(self.rates.gamma02, 0.0))
    }
}

pub fn cascade_evolution(config: &CascadeConfig) -> Result<Evolution> {
    if !(config.alpha_d >= 0.0 && config.alpha_d.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "alpha_d",
            reason: format!("drive amplitude must be finite and non-negative, got {}", config.alpha_d),
        });
    }
    if !(0.0 <= config.t0 && config.t0 < config.t_end) {
        return Err(Error::InvalidParameter {
            name: "t_end",
            reason: format!("need 0 <= t0 < T, got t0 = {}, T = {}", config.t0, config.t_end),
        });
    }
    let params = config.params();
    params.validate()?;
    let drive = pulse_or_none(config.alpha_d, config.t0, effective_coupling(config.rates.gamma02, 0.0))?;
    Evolution::build(
        &params,
        &drive,
        &PhaseSchedule::constant(0.0),
        DensityMatrix::basis(3, 0),
        (0.0, config.t_end),
        &[config.t0],
    )
}

/// G_ii, G_ss, G_is and V over `[t₀, T]`.
pub fn run_cascade(config: &CascadeConfig) -> Result<CrossPairResult> {
    let ev = cascade_evolution(config)?;
    cross_pair_result(&ev, IDLER, SIGNAL, (config.t0, config.t_end))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeRow {
    pub alpha_d: f64,
    pub gamma02: f64,
    pub result: CrossPairResult,
}

/// V over the grid `alphas × gamma02s`, rows ordered alpha-major.
pub fn sweep_cascade(base: &CascadeConfig, alphas: &[f64], gamma02s: &[f64]) -> Result<Vec<CascadeRow>> {
    let points: Vec<(f64, f64)> = alphas
        .iter()
        .flat_map(|&a| gamma02s.iter().map(move |&g| (a, g)))
        .collect();
    points
        .par_iter()
        .map(|&(alpha_d, gamma02)| {
            let mut cfg = *base;
            cfg.alpha_d = alpha_d;
            cfg.rates.gamma02 = gamma02;
            Ok(CascadeRow {
                alpha_d,
                gamma02,
                result: run_cascade(&cfg)?,
            })
        })
        .collect()
}

/// `n` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// 5×5 default region: α_d ∈ [5, 10], Γ₀₂ ∈ [0.05, 0.5].
pub fn default_sweep_axes() -> (Vec<f64>, Vec<f64>) {
    (linspace(5.0, 10.0, 5), linspace(0.05, 0.5, 5))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undriven_cascade_is_dark() {
        let r = run_cascade(&CascadeConfig::new(LadderRates::transmon(), 0.0)).unwrap();
        assert_eq!(r.v, 0.0);
        assert_eq!(r.g_is, 0.0);
    }

    #[test]
    fn pulse_width_uses_zero_two_channel() {
        let w = CascadeConfig::default().pulse_width().unwrap();
        assert!((w - std::f64::consts::PI / (10.0 * 0.1f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn linspace_ends() {
        assert_eq!(linspace(5.0, 10.0, 5), vec![5.0, 6.25, 7.5, 8.75, 10.0]);
        assert_eq!(linspace(1.0, 2.0, 1), vec![1.0]);
    }
}
