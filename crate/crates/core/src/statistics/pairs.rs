//! Cross-correlations of two output channels of the three-level ladder.

use super::counting::{chain_integrals, correlator_chain};
use crate::dynamics::Evolution;
use crate::error::{Error, Result};

/// Double integrals of the pair correlator and the metric V.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossPairResult {
    pub g_ii: f64,
    pub g_ss: f64,
    pub g_is: f64,
    pub v: f64,
}

impl CrossPairResult {
    pub fn new(g_ii: f64, g_ss: f64, g_is: f64) -> Self {
        Self {
            g_ii,
            g_ss,
            g_is,
            v: csi_metric(g_ii, g_ss, g_is),
        }
    }

    /// V > 0 violates the classical Cauchy-Schwarz bound.
    pub fn is_nonclassical(&self) -> bool {
        self.v > 0.0
    }
}

/// V = G_is² − G_ii·G_ss.
pub fn csi_metric(g_ii: f64, g_ss: f64, g_is: f64) -> f64 {
    g_is * g_is - g_ii * g_ss
}

fn require_ladder(ev: &Evolution) -> Result<()> {
    if ev.dim() != 3 {
        return Err(Error::InvalidParameter {
            name: "levels",
            reason: format!("pair correlations need the three-level ladder, got dimension {}", ev.dim()),
        });
    }
    Ok(())
}

/// Time-ordered pair kernel ⟨L_a†(t₁) L_b†(t₂) L_b(t₂) L_a(t₁)⟩: the
/// earlier jump is applied first.
pub fn pair_kernel(ev: &Evolution, a: usize, b: usize, t1: f64, t2: f64) -> Result<f64> {
    require_ladder(ev)?;
    if t1 <= t2 {
        correlator_chain(ev, &[a, b], &[t1, t2])
    } else {
        correlator_chain(ev, &[b, a], &[t2, t1])
    }
}

/// G_ab = ∫∫_{[t₀, T]²} of the time-ordered pair kernel.
pub fn cross_pair_integral(ev: &Evolution, a: usize, b: usize, window: (f64, f64)) -> Result<f64> {
    require_ladder(ev)?;
    if a == b {
        Ok(2.0 * chain_integrals(ev, &[a, a], window)?[1])
    } else {
        let ab = chain_integrals(ev, &[a, b], window)?[1];
        let ba = chain_integrals(ev, &[b, a], window)?[1];
        Ok(ab + ba)
    }
}

/// G_ii, G_ss, G_is and V for idler channel `i` and signal channel `s`.
pub fn cross_pair_result(ev: &Evolution, idler: usize, signal: usize, window: (f64, f64)) -> Result<CrossPairResult> {
    Ok(CrossPairResult::new(
        cross_pair_integral(ev, idler, idler, window)?,
        cross_pair_integral(ev, signal, signal, window)?,
        cross_pair_integral(ev, idler, signal, window)?,
    ))
}
