//! Excite while weakly coupled, store at φ = π, then release through a
//! φ(t) ramp chosen so the photon leaves with a prescribed envelope ξ(t).

use std::f64::consts::PI;

use log::warn;

use super::beam_splitter::{pulse_or_none, require_qubit};
use super::guard::check_anharmonicity;
use crate::dynamics::{
    effective_coupling, uniform_times, Evolution, MirrorQubitParams, PhaseSchedule, SampledRamp,
};
use crate::error::{Error, Result};
use crate::quantum::{DensityMatrix, Operator, C64};
use crate::statistics::{photon_statistics, CountingOptions, PhotonStatistics};

/// Default share of the packet that clipping may distort.
pub const DEFAULT_CLIP_BUDGET: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PacketKind {
    Exponential { kappa: f64 },
    Gaussian { center: f64, sigma: f64 },
    Custom,
}

/// Sampled photon envelope ξ(τ), τ measured from the release time.
///
/// Samples are scaled so that the trapezoid integral of |ξ|² plus the
/// analytic mass past the last sample equals 1.
#[derive(Debug, Clone, PartialEq)]
pub struct WavePacket {
    times: Vec<f64>,
    xi: Vec<C64>,
    kind: PacketKind,
    tail_mass: f64,
}

fn trapezoid(times: &[f64], f: &[f64]) -> f64 {
    times
        .windows(2)
        .zip(f.windows(2))
        .map(|(t, y)| 0.5 * (t[1] - t[0]) * (y[0] + y[1]))
        .sum()
}

impl WavePacket {
    fn normalized(times: Vec<f64>, xi: Vec<C64>, kind: PacketKind, tail_mass: f64) -> Result<Self> {
        if times.len() < 2 || times.len() != xi.len() {
            return Err(Error::InvalidParameter {
                name: "packet",
                reason: format!("need at least two samples and one ξ per time, got {} and {}", times.len(), xi.len()),
            });
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) || times[0] < 0.0 || times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "packet",
                reason: "sample times must be finite, non-negative and strictly increasing".into(),
            });
        }
        let intensity: Vec<f64> = xi.iter().map(|z| z.norm_sqr()).collect();
        let mass = trapezoid(&times, &intensity);
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "packet",
                reason: "envelope has no weight".into(),
            });
        }
        let scale = ((1.0 - tail_mass) / mass).sqrt();
        Ok(Self {
            times,
            xi: xi.into_iter().map(|z| z * scale).collect(),
            kind,
            tail_mass,
        })
    }

    /// ξ(τ) = √κ e^{−κτ/2}, sampled on `[0, duration]`.
    pub fn exponential(kappa: f64, duration: f64, dt: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "kappa",
                reason: format!("decay rate must be positive, got {kappa}"),
            });
        }
        let times = uniform_times(0.0, duration, dt);
        let xi = times
            .iter()
            .map(|&t| C64::new((kappa * (-kappa * t).exp()).sqrt(), 0.0))
            .collect();
        Self::normalized(times, xi, PacketKind::Exponential { kappa }, (-kappa * duration).exp())
    }

    /// |ξ|² a normal density truncated at ±4σ, sampled from τ = 0.
    pub fn gaussian(center: f64, sigma: f64, dt: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite() && center.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "sigma",
                reason: format!("width must be positive, got {sigma}"),
            });
        }
        let end = center + 4.0 * sigma;
        if end <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "center",
                reason: "packet lies entirely before the release".into(),
            });
        }
        let times = uniform_times(0.0, end, dt);
        let xi = times
            .iter()
            .map(|&t| {
                let x = (t - center) / sigma;
                let v = if x.abs() <= 4.0 { (-0.25 * x * x).exp() } else { 0.0 };
                C64::new(v, 0.0)
            })
            .collect();
        Self::normalized(times, xi, PacketKind::Gaussian { center, sigma }, 0.0)
    }

    /// Centered 4/Γ after release with σ = 1/Γ, sampled at 0.01/Γ.
    pub fn default_gaussian(gamma: f64) -> Result<Self> {
        Self::gaussian(4.0 / gamma, 1.0 / gamma, 0.01 / gamma)
    }

    /// Arbitrary envelope; zero after the last sample.
    pub fn from_samples(times: Vec<f64>, xi: Vec<C64>) -> Result<Self> {
        Self::normalized(times, xi, PacketKind::Custom, 0.0)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn xi(&self) -> &[C64] {
        &self.xi
    }

    pub fn kind(&self) -> PacketKind {
        self.kind
    }

    pub fn support_end(&self) -> f64 {
        *self.times.last().expect("at least two samples")
    }

    pub fn intensity(&self) -> Vec<f64> {
        self.xi.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn norm(&self) -> f64 {
        trapezoid(&self.times, &self.intensity()) + self.tail_mass
    }

    /// |ξ(τ)|², linear between samples.
    pub fn intensity_at(&self, tau: f64) -> f64 {
        let end = self.support_end();
        if tau < self.times[0] {
            return 0.0;
        }
        if tau > end {
            return match self.kind {
                PacketKind::Exponential { kappa } => self.intensity_at(end) * (-kappa * (tau - end)).exp(),
                _ => 0.0,
            };
        }
        let i = self.times.partition_point(|&t| t <= tau).min(self.times.len() - 1).max(1);
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let (y0, y1) = (self.xi[i - 1].norm_sqr(), self.xi[i].norm_sqr());
        y0 + (y1 - y0) * (tau - t0) / (t1 - t0)
    }

    /// Remaining weight S(τᵢ) = ∫_{τᵢ}^∞ |ξ|² at every sample (analytic for
    /// the exponential packet).
    pub fn survival(&self) -> Vec<f64> {
        if let PacketKind::Exponential { kappa } = self.kind {
            return self.times.iter().map(|t| (-kappa * t).exp()).collect();
        }
        let y = self.intensity();
        let n = self.times.len();
        let mut s = vec![0.0; n];
        s[n - 1] = self.tail_mass;
        for i in (0..n - 1).rev() {
            s[i] = s[i + 1] + 0.5 * (self.times[i + 1] - self.times[i]) * (y[i] + y[i + 1]);
        }
        s
    }

    /// Weight past `tau` (interpolated between samples).
    pub fn mass_after(&self, tau: f64) -> f64 {
        let s = self.survival();
        if tau <= self.times[0] {
            return s[0];
        }
        if tau >= self.support_end() {
            return match self.kind {
                PacketKind::Exponential { kappa } => self.tail_mass * (-kappa * (tau - self.support_end())).exp(),
                _ => 0.0,
            };
        }
        let i = self.times.partition_point(|&t| t <= tau);
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        s[i - 1] + (s[i] - s[i - 1]) * (tau - t0) / (t1 - t0)
    }

    /// Γ_eff(τ) = |ξ(τ)|² / ∫_τ^∞ |ξ|² at the samples (∞ where nothing remains).
    pub fn instantaneous_rates(&self) -> Vec<f64> {
        let y = self.intensity();
        self.survival()
            .iter()
            .zip(&y)
            .map(|(&s, &v)| match self.kind {
                PacketKind::Exponential { kappa } => kappa,
                _ if s > 0.0 => v / s,
                _ if v == 0.0 => 0.0,
                _ => f64::INFINITY,
            })
            .collect()
    }

    /// Constant rate per sample step that reproduces S at both ends of it.
    pub fn step_rates(&self) -> Vec<f64> {
        if let PacketKind::Exponential { kappa } = self.kind {
            return vec![kappa; self.times.len() - 1];
        }
        let s = self.survival();
        self.times
            .windows(2)
            .zip(s.windows(2))
            .map(|(t, s)| {
                if s[0] <= 0.0 {
                    0.0
                } else if s[1] <= 0.0 {
                    f64::INFINITY
                } else {
                    (s[0] / s[1]).ln() / (t[1] - t[0])
                }
            })
            .collect()
    }
}

/// φ ramp realizing a packet, with the rates it needed and got.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapedSchedule {
    pub ramp: SampledRamp,
    pub target_rates: Vec<f64>,
    pub rates: Vec<f64>,
    /// Total-variation distance between the emission the clipped ramp
    /// produces and |ξ|².
    pub clipped_fraction: f64,
}

fn clipped_fraction(packet: &WavePacket, target: &[f64], cap: f64) -> f64 {
    let s = packet.survival();
    let mut achieved = s[0];
    let mut tv = 0.0;
    for (i, (t, &rate)) in packet.times.windows(2).zip(target).enumerate() {
        let r = rate.clamp(0.0, cap);
        let next = achieved * (-r * (t[1] - t[0])).exp();
        tv += ((achieved - next) - (s[i] - s[i + 1])).abs();
        achieved = next;
    }
    tv += (achieved - s[s.len() - 1]).abs();
    0.5 * tv
}

/// φ = arccos(Γ_eff / Γ − 1) on the principal branch.
pub fn phase_for_rate(rate: f64, gamma: f64) -> f64 {
    (rate / gamma - 1.0).clamp(-1.0, 1.0).acos()
}

pub fn shape_to_schedule(packet: &WavePacket, gamma: f64, t_r: f64) -> Result<ShapedSchedule> {
    shape_to_schedule_with_budget(packet, gamma, t_r, DEFAULT_CLIP_BUDGET)
}

/// Release ramp starting at `t_r`; rates are clipped to [0, 2Γ].
pub fn shape_to_schedule_with_budget(packet: &WavePacket, gamma: f64, t_r: f64, budget: f64) -> Result<ShapedSchedule> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            reason: format!("coupling must be positive, got {gamma}"),
        });
    }
    let target = packet.step_rates();
    let fraction = clipped_fraction(packet, &target, 2.0 * gamma);
    if fraction > budget {
        return Err(Error::ClipBudgetExceeded {
            fraction,
            budget,
            minimal_gamma: minimal_gamma(packet, &target, gamma, budget),
        });
    }
    let rates: Vec<f64> = target.iter().map(|r| r.clamp(0.0, 2.0 * gamma)).collect();
    let times = packet.times.iter().map(|t| t_r + t).collect();
    let values = rates.iter().map(|&r| phase_for_rate(r, gamma)).collect();
    Ok(ShapedSchedule {
        ramp: SampledRamp::new(times, values)?,
        target_rates: target,
        rates,
        clipped_fraction: fraction,
    })
}

fn minimal_gamma(packet: &WavePacket, target: &[f64], gamma: f64, budget: f64) -> f64 {
    let within = |g: f64| clipped_fraction(packet, target, 2.0 * g) <= budget;
    let mut lo = gamma;
    let mut hi = 2.0 * gamma;
    let mut doublings = 0;
    while !within(hi) {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 60 {
            return f64::INFINITY;
        }
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if within(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-9 * hi {
            break;
        }
    }
    hi
}

#[derive(Debug, Clone, PartialEq)]
pub enum Release {
    /// Hold φ_r from t_r on.
    Constant { phi_r: f64 },
    Packet(WavePacket),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapedReleaseConfig {
    pub phi_i: f64,
    pub alpha0: f64,
    pub t0: f64,
    pub t_r: f64,
    pub t_end: f64,
    pub release: Release,
    pub counting: CountingOptions,
    pub clip_budget: f64,
    pub anharmonicity: f64,
}

impl ShapedReleaseConfig {
    /// φ_i = 0.9π, t₀ = 1, t_r = 8, T = 20 and the default Gaussian for Γ = 1.
    pub fn new(alpha0: f64) -> Self {
        Self {
            phi_i: 0.9 * PI,
            alpha0,
            t0: 1.0,
            t_r: 8.0,
            t_end: 20.0,
            release: Release::Packet(WavePacket::default_gaussian(1.0).expect("valid default packet")),
            counting: CountingOptions::default(),
            clip_budget: DEFAULT_CLIP_BUDGET,
            anharmonicity: super::DEFAULT_ANHARMONICITY,
        }
    }

    pub fn with_release(mut self, release: Release) -> Self {
        self.release = release;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapedReleaseResult {
    /// Statistics over [t_r, T].
    pub statistics: PhotonStatistics,
    pub times: Vec<f64>,
    pub flux: Vec<f64>,
    pub phase: Vec<f64>,
    pub excited: Vec<f64>,
    /// |ξ(t − t_r)|² on `times` when a packet was requested.
    pub target_flux: Option<Vec<f64>>,
    /// Relative L2 distance between the unit-area flux on [t_r, T] and |ξ|².
    pub flux_l2_error: Option<f64>,
    pub clipped_fraction: f64,
    /// Packet weight falling after T.
    pub window_truncation: f64,
    pub pulse_width: f64,
}

struct Prepared {
    evolution: Evolution,
    schedule: PhaseSchedule,
    packet: Option<WavePacket>,
    clipped_fraction: f64,
    pulse_width: f64,
}

fn prepare(params: &MirrorQubitParams, config: &ShapedReleaseConfig) -> Result<Prepared> {
    require_qubit(params)?;
    if !(0.0 <= config.t0 && config.t0 <= config.t_r && config.t_r < config.t_end) {
        return Err(Error::InvalidParameter {
            name: "t_r",
            reason: format!(
                "need 0 <= t0 <= t_r < T, got t0 = {}, t_r = {}, T = {}",
                config.t0, config.t_r, config.t_end
            ),
        });
    }
    let gamma_eff = effective_coupling(params.gamma, config.phi_i);
    check_anharmonicity(config.alpha0, gamma_eff, config.anharmonicity);
    let drive = pulse_or_none(config.alpha0, config.t0, gamma_eff)?;
    let pulse_end = drive.end().unwrap_or(config.t0);
    let (ramp, packet, clipped) = match &config.release {
        Release::Constant { phi_r } => (
            SampledRamp::new(vec![config.t_r, config.t_end], vec![*phi_r])?,
            None,
            0.0,
        ),
        Release::Packet(p) => {
            let shaped = shape_to_schedule_with_budget(p, params.gamma, config.t_r, config.clip_budget)?;
            (shaped.ramp, Some(p.clone()), shaped.clipped_fraction)
        }
    };
    let schedule = PhaseSchedule::store_and_release(config.phi_i, pulse_end, ramp)?;
    let evolution = Evolution::build(
        params,
        &drive,
        &schedule,
        DensityMatrix::basis(2, 0),
        (0.0, config.t_end),
        &[config.t_r],
    )?;
    Ok(Prepared {
        evolution,
        schedule,
        packet,
        clipped_fraction: clipped,
        pulse_width: pulse_end - config.t0,
    })
}

/// Evolution of the full excite/store/release timeline.
pub fn shaped_release_evolution(params: &MirrorQubitParams, config: &ShapedReleaseConfig) -> Result<Evolution> {
    Ok(prepare(params, config)?.evolution)
}

/// Statistics over [t_r, T] only, without the sampled series.
pub fn shaped_release_statistics(params: &MirrorQubitParams, config: &ShapedReleaseConfig) -> Result<PhotonStatistics> {
    let prep = prepare(params, config)?;
    photon_statistics(&prep.evolution, 0, (config.t_r, config.t_end), &config.counting)
}

pub fn run_shaped_release(params: &MirrorQubitParams, config: &ShapedReleaseConfig) -> Result<ShapedReleaseResult> {
    let prep = prepare(params, config)?;
    let ev = &prep.evolution;
    let statistics = photon_statistics(ev, 0, (config.t_r, config.t_end), &config.counting)?;
    let times = uniform_times(0.0, config.t_end, config.counting.grid.dt);
    let states = ev.states_at(&times)?;
    let excited_op = Operator::projector(2, 1);
    let excited = states.iter().map(|r| r.expectation(&excited_op).re).collect();
    let flux: Vec<f64> = times
        .iter()
        .zip(&states)
        .map(|(&t, rho)| {
            let l = ev.segments()[ev.segment_at(t)].output(0);
            rho.expectation(&(&l.dagger() * l)).re
        })
        .collect();
    let phase = times.iter().map(|&t| prep.schedule.phase_at(t)).collect();

    let mut target_flux = None;
    let mut flux_l2_error = None;
    let mut window_truncation = 0.0;
    if let Some(packet) = &prep.packet {
        let target: Vec<f64> = times
            .iter()
            .map(|&t| if t < config.t_r { 0.0 } else { packet.intensity_at(t - config.t_r) })
            .collect();
        flux_l2_error = Some(relative_l2(&times, &flux, &target, config.t_r));
        window_truncation = packet.mass_after(config.t_end - config.t_r);
        if window_truncation > 1e-3 {
            warn!(
                "release window [{}, {}] misses {:.2}% of the packet",
                config.t_r,
                config.t_end,
                100.0 * window_truncation
            );
        }
        target_flux = Some(target);
    }
    Ok(ShapedReleaseResult {
        statistics,
        times,
        flux,
        phase,
        excited,
        target_flux,
        flux_l2_error,
        clipped_fraction: prep.clipped_fraction,
        window_truncation,
        pulse_width: prep.pulse_width,
    })
}

/// ‖f/∫f − g‖₂ / ‖g‖₂ over `t ≥ from`.
fn relative_l2(times: &[f64], f: &[f64], g: &[f64], from: f64) -> f64 {
    let start = times.partition_point(|&t| t < from);
    let t = &times[start..];
    let (f, g) = (&f[start..], &g[start..]);
    let area = trapezoid(t, f);
    if area <= 0.0 {
        return f64::INFINITY;
    }
    let diff: Vec<f64> = f.iter().zip(g).map(|(a, b)| (a / area - b).powi(2)).collect();
    let norm: Vec<f64> = g.iter().map(|b| b * b).collect();
    (trapezoid(t, &diff) / trapezoid(t, &norm)).sqrt()
}
