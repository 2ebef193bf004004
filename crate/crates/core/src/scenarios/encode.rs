//! Writing μ|0⟩ + ν|1⟩ onto the emitter with one square pulse, ahead of
//! releasing it as a flying qubit.

use std::f64::consts::PI;

use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;

use super::beam_splitter::require_qubit;
use super::guard::check_anharmonicity;
use crate::dynamics::{build_liouvillian, effective_coupling, DriveSchedule, MirrorQubitParams};
use crate::error::{Error, Result};
use crate::quantum::{sup_exp, DensityMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlyingQubitTarget {
    mu: C64,
    nu: C64,
}

impl FlyingQubitTarget {
    pub fn new(mu: C64, nu: C64) -> Result<Self> {
        let norm = mu.norm_sqr() + nu.norm_sqr();
        if !((norm - 1.0).abs() <= 1e-10) {
            return Err(Error::InvalidParameter {
                name: "target",
                reason: format!("|mu|^2 + |nu|^2 = {norm}, expected 1"),
            });
        }
        Ok(Self { mu, nu })
    }

    /// cos(θ/2)|0⟩ + e^{iϕ} sin(θ/2)|1⟩.
    pub fn from_bloch(theta: f64, azimuth: f64) -> Self {
        Self {
            mu: C64::new((0.5 * theta).cos(), 0.0),
            nu: C64::from_polar((0.5 * theta).sin(), azimuth),
        }
    }

    pub fn mu(&self) -> C64 {
        self.mu
    }

    pub fn nu(&self) -> C64 {
        self.nu
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        [self.mu, self.nu]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncodeConfig {
    /// Round-trip phase held during the pulse.
    pub phi: f64,
    /// Upper bound on the Rabi frequency 2|α|√Γ_eff searched.
    pub rabi_max: f64,
    /// Detuning search range around the Lamb-shift compensation.
    pub delta_span: f64,
    pub t_max: f64,
    pub anharmonicity: f64,
    pub max_iters: u64,
}

impl Default for EncodeConfig {
    fn default() -> Self {
        Self {
            phi: 0.99 * PI,
            rabi_max: 20.0,
            delta_span: 20.0,
            t_max: 5.0,
            anharmonicity: super::DEFAULT_ANHARMONICITY,
            max_iters: 4000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncodeResult {
    pub drive: DriveSchedule,
    pub delta: f64,
    pub alpha: C64,
    pub pulse_width: f64,
    pub fidelity: f64,
    pub exceeds_anharmonicity: bool,
}

/// ⟨ψ|ρ|ψ⟩ after a square pulse (Δ, α, t_w) applied to |0⟩ at phase φ.
pub fn pulse_fidelity(
    params: &MirrorQubitParams,
    phi: f64,
    delta: f64,
    alpha: C64,
    width: f64,
    target: &FlyingQubitTarget,
) -> Result<f64> {
    let lv = build_liouvillian(&params.with_delta(delta), phi, alpha)?;
    let rho = sup_exp(&lv, width)?.apply_state(&DensityMatrix::basis(2, 0));
    Ok(rho.fidelity_with(&target.amplitudes()))
}

struct Search<'a> {
    params: &'a MirrorQubitParams,
    target: &'a FlyingQubitTarget,
    phi: f64,
    scale: f64,
    sqrt_geff: f64,
    lamb: f64,
    config: &'a EncodeConfig,
}

impl Search<'_> {
    /// Scaled coordinates → clamped (Δ, α, t_w).
    fn decode(&self, x: &[f64]) -> (f64, C64, f64) {
        let span = self.config.delta_span;
        let delta = self.lamb + (x[0] * self.scale).clamp(-span, span);
        let mut g = C64::new(x[1], x[2]) * self.scale;
        if 2.0 * g.norm() > self.config.rabi_max {
            g *= self.config.rabi_max / (2.0 * g.norm());
        }
        let width = (x[3] / self.scale).clamp(0.0, self.config.t_max);
        (delta, g / self.sqrt_geff, width)
    }

    fn encode(&self, delta: f64, alpha: C64, width: f64) -> Vec<f64> {
        let g = alpha * self.sqrt_geff / self.scale;
        vec![(delta - self.lamb) / self.scale, g.re, g.im, width * self.scale]
    }
}

impl CostFunction for Search<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        let (delta, alpha, width) = self.decode(x);
        let f = pulse_fidelity(self.params, self.phi, delta, alpha, width, self.target)
            .map_err(|e| argmin::core::Error::msg(e.to_string()))?;
        Ok(1.0 - f)
    }
}

/// Bounded Nelder-Mead search over (Δ, Re α, Im α, t_w).
pub fn encode_flying_qubit(
    target: &FlyingQubitTarget,
    params: &MirrorQubitParams,
    config: &EncodeConfig,
) -> Result<EncodeResult> {
    require_qubit(params)?;
    params.validate()?;
    let gamma_eff = effective_coupling(params.gamma, config.phi);
    let lamb = 0.5 * params.gamma * config.phi.sin();
    if target.nu.norm() < 1e-12 {
        let fidelity = pulse_fidelity(params, config.phi, lamb, C64::new(0.0, 0.0), 0.0, target)?;
        return Ok(EncodeResult {
            drive: DriveSchedule::none(),
            delta: lamb,
            alpha: C64::new(0.0, 0.0),
            pulse_width: 0.0,
            fidelity,
            exceeds_anharmonicity: false,
        });
    }
    if gamma_eff <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "phi",
            reason: "the drive does not couple at φ = π".into(),
        });
    }
    let search = Search {
        params,
        target,
        phi: config.phi,
        scale: config.rabi_max,
        sqrt_geff: gamma_eff.sqrt(),
        lamb,
        config,
    };
    // resonant rotation by θ = atan2(|ν|, |μ|) at half the maximal Rabi rate
    let g0 = 0.25 * config.rabi_max;
    let theta = target.nu.norm().atan2(target.mu.norm());
    let arg = target.nu.arg() - target.mu.arg() + PI - 0.5 * config.phi;
    let alpha0 = C64::from_polar(g0 / gamma_eff.sqrt(), arg);
    let x0 = search.encode(lamb, alpha0, theta / g0);
    let mut simplex = vec![x0.clone()];
    for i in 0..4 {
        let mut x = x0.clone();
        x[i] += if x[i].abs() > 1e-3 { 0.1 * x[i] } else { 0.05 };
        simplex.push(x);
    }
    let solver = NelderMead::new(simplex)
        .with_sd_tolerance(1e-15)
        .map_err(|e| Error::Invariant(e.to_string()))?;
    let outcome = Executor::new(search, solver)
        .configure(|s| s.max_iters(config.max_iters))
        .run()
        .map_err(|e| Error::Invariant(format!("pulse search failed: {e}")))?;
    let state = outcome.state();
    let best = state
        .best_param
        .clone()
        .ok_or_else(|| Error::Invariant("pulse search returned no point".into()))?;
    let search = &outcome.problem.problem.as_ref().expect("problem is kept");
    let (delta, alpha, width) = search.decode(&best);
    let fidelity = pulse_fidelity(params, config.phi, delta, alpha, width, target)?;
    let exceeds = check_anharmonicity(alpha.norm(), gamma_eff, config.anharmonicity);
    Ok(EncodeResult {
        drive: DriveSchedule::square_pulse(alpha, 0.0, width)?,
        delta,
        alpha,
        pulse_width: width,
        fidelity,
        exceeds_anharmonicity: exceeds,
    })
}
