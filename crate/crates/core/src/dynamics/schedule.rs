use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::quantum::C64;

/// Constant drive amplitude on `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSegment {
    pub start: f64,
    pub end: f64,
    pub amplitude: C64,
}

/// Piecewise-constant input amplitude α_in(t); zero outside all segments.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DriveSchedule {
    segments: Vec<DriveSegment>,
}

fn check_ordered(spans: impl Iterator<Item = (f64, f64)>, what: &'static str) -> Result<()> {
    let mut last_end = f64::NEG_INFINITY;
    for (start, end) in spans {
        if !(start.is_finite() && end.is_finite() && start <= end) {
            return Err(Error::InvalidParameter {
                name: what,
                reason: format!("segment [{start}, {end}) is not a finite forward interval"),
            });
        }
        if start < last_end {
            return Err(Error::InvalidParameter {
                name: what,
                reason: format!("segment starting at {start} overlaps the previous one"),
            });
        }
        last_end = end;
    }
    Ok(())
}

impl DriveSchedule {
    pub fn new(segments: Vec<DriveSegment>) -> Result<Self> {
        check_ordered(segments.iter().map(|s| (s.start, s.end)), "drive")?;
        if segments
            .iter()
            .any(|s| !(s.amplitude.re.is_finite() && s.amplitude.im.is_finite()))
        {
            return Err(Error::InvalidParameter {
                name: "drive",
                reason: "amplitude must be finite".into(),
            });
        }
        Ok(Self { segments })
    }

    pub fn none() -> Self {
        Self::default()
    }

    /// α_in(t) = [Θ(t − t₀) − Θ(t − t₀ − t_w)] α₀.
    pub fn square_pulse(alpha0: C64, t0: f64, width: f64) -> Result<Self> {
        Self::new(vec![DriveSegment {
            start: t0,
            end: t0 + width,
            amplitude: alpha0,
        }])
    }

    /// Square π-pulse starting at `t0` with width `π / (2|α₀|√Γ_eff)`.
    pub fn pi_pulse(alpha0: C64, t0: f64, gamma_eff: f64) -> Result<Self> {
        let width = super::pi_pulse_width(alpha0.norm(), gamma_eff)?;
        Self::square_pulse(alpha0, t0, width)
    }

    pub fn segments(&self) -> &[DriveSegment] {
        &self.segments
    }

    pub fn amplitude_at(&self, t: f64) -> C64 {
        self.segments
            .iter()
            .find(|s| s.start <= t && t < s.end)
            .map(|s| s.amplitude)
            .unwrap_or_default()
    }

    /// Same schedule with every amplitude multiplied by `e^{iθ}`.
    pub fn rotated(&self, theta: f64) -> Self {
        let r = C64::from_polar(1.0, theta);
        Self {
            segments: self
                .segments
                .iter()
                .map(|s| DriveSegment {
                    amplitude: s.amplitude * r,
                    ..*s
                })
                .collect(),
        }
    }

    pub fn end(&self) -> Option<f64> {
        self.segments.last().map(|s| s.end)
    }

    pub(crate) fn breakpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.segments.iter().flat_map(|s| [s.start, s.end])
    }
}

/// Constant phase on `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSegment {
    pub start: f64,
    pub end: f64,
    pub phi: f64,
}

/// Sampled φ ramp: `values[i]` holds on `[times[i], times[i+1])`, and the last
/// value holds after the final sample time.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledRamp {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl SampledRamp {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() + 1 || values.is_empty() {
            return Err(Error::InvalidParameter {
                name: "ramp",
                reason: format!(
                    "need one more sample time than values, got {} times and {} values",
                    times.len(),
                    values.len()
                ),
            });
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) || times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "ramp",
                reason: "sample times must be finite and strictly increasing".into(),
            });
        }
        let values = values.into_iter().map(wrap_phase).collect();
        Ok(Self { times, values })
    }

    pub fn start(&self) -> f64 {
        self.times[0]
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn value_at(&self, t: f64) -> Option<f64> {
        if t < self.times[0] {
            return None;
        }
        let idx = self.times.partition_point(|&x| x <= t);
        Some(self.values[(idx - 1).min(self.values.len() - 1)])
    }
}

/// Maps φ into [0, 2π).
pub fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Piecewise description of the round-trip phase φ(t).
///
/// Lookup order: the ramp (from its first sample on), then explicit segments,
/// then `default`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSchedule {
    default: f64,
    segments: Vec<PhaseSegment>,
    ramp: Option<SampledRamp>,
}

impl PhaseSchedule {
    pub fn constant(phi: f64) -> Self {
        Self {
            default: wrap_phase(phi),
            segments: Vec::new(),
            ramp: None,
        }
    }

    pub fn new(default: f64, segments: Vec<PhaseSegment>, ramp: Option<SampledRamp>) -> Result<Self> {
        check_ordered(segments.iter().map(|s| (s.start, s.end)), "phase")?;
        let segments = segments
            .into_iter()
            .map(|s| PhaseSegment {
                phi: wrap_phase(s.phi),
                ..s
            })
            .collect();
        Ok(Self {
            default: wrap_phase(default),
            segments,
            ramp,
        })
    }

    /// Excite at `phi_i`, store at φ = π from `store_from`, then follow `ramp`.
    pub fn store_and_release(phi_i: f64, store_from: f64, ramp: SampledRamp) -> Result<Self> {
        let release = ramp.start();
        if release < store_from {
            return Err(Error::InvalidParameter {
                name: "t_r",
                reason: format!("release time {release} precedes the end of the pulse {store_from}"),
            });
        }
        Self::new(
            phi_i,
            vec![PhaseSegment {
                start: store_from,
                end: release,
                phi: PI,
            }],
            Some(ramp),
        )
    }

    pub fn phase_at(&self, t: f64) -> f64 {
        if let Some(v) = self.ramp.as_ref().and_then(|r| r.value_at(t)) {
            return v;
        }
        self.segments
            .iter()
            .find(|s| s.start <= t && t < s.end)
            .map(|s| s.phi)
            .unwrap_or(self.default)
    }

    /// Release time t_r (first ramp sample), if a ramp is present.
    pub fn release_time(&self) -> Option<f64> {
        self.ramp.as_ref().map(SampledRamp::start)
    }

    pub fn ramp(&self) -> Option<&SampledRamp> {
        self.ramp.as_ref()
    }

    pub(crate) fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.segments.iter().flat_map(|s| [s.start, s.end]).collect();
        if let Some(r) = &self.ramp {
            out.extend_from_slice(&r.times);
        }
        out
    }
}
