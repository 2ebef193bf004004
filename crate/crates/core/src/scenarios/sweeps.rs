//! Loss sweeps: non-radiative decay and storage time.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::beam_splitter::{run_beam_splitter, BeamSplitterConfig};
use super::shaped::{shaped_release_statistics, Release, ShapedReleaseConfig};
use crate::dynamics::{effective_coupling, pi_pulse_width, MirrorQubitParams};
use crate::error::{Error, Result};
use crate::statistics::CountingOptions;

/// One sweep point: the swept value and P₀..P_k.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub probabilities: Vec<f64>,
}

impl SweepRow {
    pub fn p(&self, n: usize) -> f64 {
        self.probabilities.get(n).copied().unwrap_or(0.0)
    }
}

/// Beam-splitter statistics for each Γ_nr, in input order.
pub fn sweep_nonradiative(
    params: &MirrorQubitParams,
    config: &BeamSplitterConfig,
    options: &CountingOptions,
    gamma_nrs: &[f64],
) -> Result<Vec<SweepRow>> {
    gamma_nrs
        .par_iter()
        .map(|&g| {
            if !(g >= 0.0 && g.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "gamma_nr",
                    reason: format!("rate must be finite and non-negative, got {g}"),
                });
            }
            let stats = run_beam_splitter(&params.with_gamma_nr(g), config, options)?;
            Ok(SweepRow {
                x: g,
                probabilities: stats.probabilities,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaitSweepConfig {
    pub alpha0: f64,
    pub gamma_nr: f64,
    pub phi_i: f64,
    pub phi_r: f64,
    pub t0: f64,
    /// Length of the counting window after t_r.
    pub window: f64,
    pub counting: CountingOptions,
}

impl Default for WaitSweepConfig {
    fn default() -> Self {
        Self {
            alpha0: 10.0,
            gamma_nr: 0.1,
            phi_i: 0.9 * PI,
            phi_r: PI / 2.0,
            t0: 1.0,
            window: 12.0,
            counting: CountingOptions::default(),
        }
    }
}

impl WaitSweepConfig {
    /// Shaped-release run releasing `t_wait` after the pulse ends.
    pub fn release_config(&self, params: &MirrorQubitParams, t_wait: f64) -> Result<ShapedReleaseConfig> {
        if !(t_wait >= 0.0 && t_wait.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "t_wait",
                reason: format!("wait time must be finite and non-negative, got {t_wait}"),
            });
        }
        let width = if self.alpha0 == 0.0 {
            0.0
        } else {
            pi_pulse_width(self.alpha0, effective_coupling(params.gamma, self.phi_i))?
        };
        let t_r = self.t0 + width + t_wait;
        let mut cfg = ShapedReleaseConfig::new(self.alpha0).with_release(Release::Constant { phi_r: self.phi_r });
        cfg.phi_i = self.phi_i;
        cfg.t0 = self.t0;
        cfg.t_r = t_r;
        cfg.t_end = t_r + self.window;
        cfg.counting = self.counting;
        Ok(cfg)
    }
}

/// Shaped-release statistics for each storage time, in input order.
pub fn sweep_wait_time(params: &MirrorQubitParams, config: &WaitSweepConfig, t_waits: &[f64]) -> Result<Vec<SweepRow>> {
    let params = params.with_gamma_nr(config.gamma_nr);
    t_waits
        .par_iter()
        .map(|&t_wait| {
            let cfg = config.release_config(&params, t_wait)?;
            let stats = shaped_release_statistics(&params, &cfg)?;
            Ok(SweepRow {
                x: t_wait,
                probabilities: stats.probabilities,
            })
        })
        .collect()
}
