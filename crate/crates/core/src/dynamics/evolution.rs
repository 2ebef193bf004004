//! Piecewise-constant time evolution.
//!
//! The drive and phase schedules partition the simulation span into segments
//! on which 𝓛 is constant, so a two-time propagator is an ordered product of
//! segment exponentials. Full-segment exponentials are memoized per
//! [`Evolution`]; the memo is write-once and safe to share across threads.

use std::sync::OnceLock;

use log::warn;

use super::model::{build_liouvillian, output_operators};
use super::params::MirrorQubitParams;
use super::schedule::{DriveSchedule, PhaseSchedule};
use crate::error::{Error, Result};
use crate::quantum::{sup_exp, DensityMatrix, Operator, Superoperator, C64};

/// Grid controls for quadratures and sampled series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Target step Γ·dt.
    pub dt: f64,
    /// Minimum number of steps on every segment.
    pub min_steps_per_segment: usize,
    /// Minimum number of steps on a driven segment.
    pub min_steps_per_pulse: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            dt: 0.01,
            min_steps_per_segment: 2,
            min_steps_per_pulse: 64,
        }
    }
}

impl GridSpec {
    pub fn with_dt(dt: f64) -> Self {
        Self {
            dt,
            ..Self::default()
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "dt",
                reason: format!("grid step must be positive, got {}", self.dt),
            });
        }
        Ok(())
    }
}

/// Minimum points across a drive pulse before quadratures warn.
pub const PULSE_RESOLUTION: usize = 20;

/// A span on which the Liouvillian and output operators are constant.
#[derive(Debug)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub phi: f64,
    pub alpha: C64,
    generator: Superoperator,
    outputs: Vec<Operator>,
    full_step: OnceLock<Superoperator>,
}

impl Clone for Segment {
    fn clone(&self) -> Self {
        Self {
            start: self.start,
            end: self.end,
            phi: self.phi,
            alpha: self.alpha,
            generator: self.generator.clone(),
            outputs: self.outputs.clone(),
            full_step: OnceLock::new(),
        }
    }
}

impl Segment {
    pub fn new(start: f64, end: f64, phi: f64, alpha: C64, generator: Superoperator, outputs: Vec<Operator>) -> Self {
        Self {
            start,
            end,
            phi,
            alpha,
            generator,
            outputs,
            full_step: OnceLock::new(),
        }
    }

    pub fn duration(&self) -> f64 {
        self.end - self.start
    }

    pub fn generator(&self) -> &Superoperator {
        &self.generator
    }

    pub fn outputs(&self) -> &[Operator] {
        &self.outputs
    }

    pub fn output(&self, channel: usize) -> &Operator {
        &self.outputs[channel]
    }

    pub fn is_driven(&self) -> bool {
        self.alpha.norm() > 0.0
    }

    /// exp(𝓛 · dt) for 0 ≤ dt ≤ duration.
    pub fn step(&self, dt: f64) -> Superoperator {
        if dt == self.duration() {
            return self.full_step().clone();
        }
        sup_exp(&self.generator, dt).expect("non-negative step")
    }

    pub fn full_step(&self) -> &Superoperator {
        self.full_step
            .get_or_init(|| sup_exp(&self.generator, self.duration()).expect("non-negative duration"))
    }

    /// Number of uniform steps the grid places on this segment.
    pub fn steps(&self, spec: &GridSpec) -> usize {
        let base = ((self.duration() / spec.dt) - 1e-9).ceil().max(1.0) as usize;
        let floor = if self.is_driven() {
            spec.min_steps_per_pulse.max(spec.min_steps_per_segment)
        } else {
            spec.min_steps_per_segment
        };
        base.max(floor).max(1)
    }
}

/// Initial state plus the ordered constant segments covering `[t_start, t_end]`.
#[derive(Debug, Clone)]
pub struct Evolution {
    dim: usize,
    t_start: f64,
    t_end: f64,
    initial: DensityMatrix,
    segments: Vec<Segment>,
}

fn sorted_breakpoints(points: impl IntoIterator<Item = f64>, t_start: f64, t_end: f64) -> Vec<f64> {
    let scale = 1e-12 * (1.0 + t_end.abs().max(t_start.abs()));
    let mut pts: Vec<f64> = points
        .into_iter()
        .filter(|&t| t.is_finite() && t > t_start + scale && t < t_end - scale)
        .collect();
    pts.push(t_start);
    pts.push(t_end);
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    pts.dedup_by(|b, a| (*b - *a).abs() <= scale);
    pts
}

impl Evolution {
    /// Partitions `[t_start, t_end]` at every drive/phase breakpoint and every
    /// point in `extra_breakpoints` (e.g. the start of a counting window).
    pub fn build(
        params: &MirrorQubitParams,
        drive: &DriveSchedule,
        phase: &PhaseSchedule,
        initial: DensityMatrix,
        span: (f64, f64),
        extra_breakpoints: &[f64],
    ) -> Result<Self> {
        params.validate()?;
        let (t_start, t_end) = span;
        if !(t_start <= t_end) {
            return Err(Error::ReversedTimes { t1: t_start, t2: t_end });
        }
        initial_dim_check(params.dim(), &initial)?;
        let points = drive
            .breakpoints()
            .chain(phase.breakpoints())
            .chain(extra_breakpoints.iter().copied());
        let pts = sorted_breakpoints(points, t_start, t_end);
        let mut segments = Vec::with_capacity(pts.len());
        let mut cache: Vec<(f64, C64, Superoperator, Vec<Operator>)> = Vec::new();
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mid = 0.5 * (a + b);
            let phi = phase.phase_at(mid);
            let alpha = drive.amplitude_at(mid);
            let (generator, outputs) = match cache.iter().find(|c| c.0 == phi && c.1 == alpha) {
                Some(c) => (c.2.clone(), c.3.clone()),
                None => {
                    let g = build_liouvillian(params, phi, alpha)?;
                    let o = output_operators(params, phi);
                    cache.push((phi, alpha, g.clone(), o.clone()));
                    (g, o)
                }
            };
            segments.push(Segment::new(a, b, phi, alpha, generator, outputs));
        }
        Ok(Self {
            dim: params.dim(),
            t_start,
            t_end,
            initial,
            segments,
        })
    }

    /// Assembles an evolution from explicit segments (must tile the span).
    pub fn from_segments(initial: DensityMatrix, segments: Vec<Segment>) -> Result<Self> {
        let first = segments.first().ok_or(Error::InvalidParameter {
            name: "segments",
            reason: "at least one segment required".into(),
        })?;
        let dim = first.generator.dim();
        initial_dim_check(dim, &initial)?;
        for w in segments.windows(2) {
            if (w[1].start - w[0].end).abs() > 1e-12 {
                return Err(Error::InvalidParameter {
                    name: "segments",
                    reason: format!("gap or overlap at t = {}", w[0].end),
                });
            }
        }
        Ok(Self {
            dim,
            t_start: first.start,
            t_end: segments.last().expect("non-empty").end,
            initial,
            segments,
        })
    }

    /// Replaces the output operators of every segment.
    pub fn with_outputs(mut self, f: impl Fn(&Segment) -> Vec<Operator>) -> Self {
        for seg in &mut self.segments {
            seg.outputs = f(seg);
        }
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn span(&self) -> (f64, f64) {
        (self.t_start, self.t_end)
    }

    pub fn initial(&self) -> &DensityMatrix {
        &self.initial
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn n_outputs(&self) -> usize {
        self.segments[0].outputs.len()
    }

    /// Index of the segment governing time `t` (right-continuous).
    pub fn segment_at(&self, t: f64) -> usize {
        let idx = self.segments.partition_point(|s| s.end <= t);
        idx.min(self.segments.len() - 1)
    }

    fn check_times(&self, t1: f64, t2: f64) -> Result<()> {
        if t1 > t2 {
            return Err(Error::ReversedTimes { t1, t2 });
        }
        let tol = 1e-12 * (1.0 + self.t_end.abs());
        if t1 < self.t_start - tol || t2 > self.t_end + tol {
            return Err(Error::InvalidParameter {
                name: "t",
                reason: format!(
                    "[{t1}, {t2}] leaves the simulated span [{}, {}]",
                    self.t_start, self.t_end
                ),
            });
        }
        Ok(())
    }

    /// P(t₂, t₁): ordered product of constant-segment exponentials.
    pub fn propagator(&self, t1: f64, t2: f64) -> Result<Superoperator> {
        self.check_times(t1, t2)?;
        let mut p = Superoperator::identity(self.dim);
        if t1 == t2 {
            return Ok(p);
        }
        for seg in &self.segments {
            let a = seg.start.max(t1);
            let b = seg.end.min(t2);
            if b <= a {
                continue;
            }
            let step = if a == seg.start && b == seg.end {
                seg.full_step().clone()
            } else {
                seg.step(b - a)
            };
            p = step.compose(&p);
        }
        Ok(p)
    }

    pub fn state_at(&self, t: f64) -> Result<DensityMatrix> {
        Ok(self.propagator(self.t_start, t)?.apply_state(&self.initial))
    }

    /// ρ(t) at ascending `times`, propagating incrementally.
    pub fn states_at(&self, times: &[f64]) -> Result<Vec<DensityMatrix>> {
        if times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::UnsortedTimes);
        }
        let mut out = Vec::with_capacity(times.len());
        let mut t_prev = self.t_start;
        let mut rho = self.initial.clone();
        for &t in times {
            rho = self.propagator(t_prev, t)?.apply_state(&rho);
            out.push(rho.clone());
            t_prev = t;
        }
        Ok(out)
    }

    /// tr(O ρ(t)) on ascending `times`.
    pub fn expectation_series(&self, observable: &Operator, times: &[f64]) -> Result<Vec<f64>> {
        observable.check_dim(self.dim)?;
        Ok(self
            .states_at(times)?
            .iter()
            .map(|rho| rho.expectation(observable).re)
            .collect())
    }

    /// Output flux tr(L†L ρ(t)) of `channel`, with L taken from the segment
    /// governing each time.
    pub fn flux_series(&self, channel: usize, times: &[f64]) -> Result<Vec<f64>> {
        let states = self.states_at(times)?;
        Ok(times
            .iter()
            .zip(&states)
            .map(|(&t, rho)| {
                let l = self.segments[self.segment_at(t)].output(channel);
                rho.expectation(&(&l.dagger() * l)).re
            })
            .collect())
    }

    /// Logs a refinement hint for driven segments the grid resolves poorly.
    pub fn check_resolution(&self, spec: &GridSpec) -> bool {
        let mut ok = true;
        for seg in self.segments.iter().filter(|s| s.is_driven()) {
            let steps = seg.steps(spec);
            if steps < PULSE_RESOLUTION {
                ok = false;
                warn!(
                    "drive segment [{:.4}, {:.4}) has only {steps} grid steps; use dt <= {:.3e} or min_steps_per_pulse >= {PULSE_RESOLUTION}",
                    seg.start,
                    seg.end,
                    seg.duration() / PULSE_RESOLUTION as f64
                );
            }
        }
        ok
    }
}

fn initial_dim_check(dim: usize, initial: &DensityMatrix) -> Result<()> {
    if initial.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: initial.dim(),
        });
    }
    Ok(())
}

/// P(t₂, t₁) for the given model and schedules.
pub fn propagator(
    params: &MirrorQubitParams,
    drive: &DriveSchedule,
    phase: &PhaseSchedule,
    t1: f64,
    t2: f64,
) -> Result<Superoperator> {
    if t1 > t2 {
        return Err(Error::ReversedTimes { t1, t2 });
    }
    let ev = Evolution::build(
        params,
        drive,
        phase,
        DensityMatrix::basis(params.dim(), 0),
        (t1, t2),
        &[],
    )?;
    ev.propagator(t1, t2)
}

/// `n + 1` evenly spaced times from `t0` to `t1` with spacing close to `dt`.
pub fn uniform_times(t0: f64, t1: f64, dt: f64) -> Vec<f64> {
    let n = (((t1 - t0) / dt) - 1e-9).ceil().max(1.0) as usize;
    (0..=n)
        .map(|i| if i == n { t1 } else { t0 + (t1 - t0) * i as f64 / n as f64 })
        .collect()
}
