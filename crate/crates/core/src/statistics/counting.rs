//! Multi-time output correlators and their ordered time integrals.
//!
//! For a chain of jump channels `c₁, …, c_m` the ordered integral
//!
//! ```text
//! ∫_{t_r ≤ t₁ ≤ … ≤ t_m ≤ T} Tr[J_{c_m}(t_m) P(t_m, t_{m−1}) ⋯ J_{c₁}(t₁) ρ(t₁)]
//! ```
//!
//! with `J_c ρ = L_c ρ L_c†` obeys `σ̇_i = 𝓛 σ_i + J_{c_i} σ_{i−1}`, `σ_0 = ρ`.
//! On a constant segment that linear system has a block lower-bidiagonal
//! generator, so one exponential per segment advances every partial chain
//! at once. `Tr σ_i(T)` is the i-th nested integral.

use log::warn;
use nalgebra::DVector;

use super::inversion::{invert_to_probabilities, sanitize_probabilities};
use crate::dynamics::{Evolution, GridSpec, Segment};
use crate::error::{Error, Result};
use crate::quantum::{expm, vectorize, CMatrix, Superoperator, C64};

/// Tolerance of the N₁ dual-route cross-check.
pub const N1_CROSS_CHECK: f64 = 1e-6;

/// How the nested integrals are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MtipleMethod {
    /// Block-generator exponential per constant segment.
    #[default]
    Exact,
    /// Iterated cumulative trapezoid on the ordered simplex.
    Trapezoid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountingOptions {
    /// Cutoff k above which probabilities are taken as zero.
    pub cutoff: usize,
    pub grid: GridSpec,
    pub method: MtipleMethod,
}

impl Default for CountingOptions {
    fn default() -> Self {
        Self {
            cutoff: 3,
            grid: GridSpec::default(),
            method: MtipleMethod::Exact,
        }
    }
}

/// Photon m-tiples and number probabilities of one output channel.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonStatistics {
    /// N₁..N_k.
    pub n_tiples: Vec<f64>,
    /// P₀..P_k.
    pub probabilities: Vec<f64>,
    pub cutoff: usize,
    pub window: (f64, f64),
    pub grid_step: f64,
    /// ∫ tr(L†L ρ) dt over the window (second route to N₁).
    pub n1_flux_integral: f64,
}

impl PhotonStatistics {
    pub fn p(&self, n: usize) -> f64 {
        self.probabilities.get(n).copied().unwrap_or(0.0)
    }

    pub fn n(&self, m: usize) -> f64 {
        self.n_tiples.get(m - 1).copied().unwrap_or(0.0)
    }

    pub fn total_probability(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

fn check_window(ev: &Evolution, window: (f64, f64)) -> Result<()> {
    let (lo, hi) = ev.span();
    let tol = 1e-12 * (1.0 + hi.abs());
    if window.0 > window.1 {
        return Err(Error::ReversedTimes {
            t1: window.0,
            t2: window.1,
        });
    }
    if window.0 < lo - tol || window.1 > hi + tol {
        return Err(Error::InvalidParameter {
            name: "window",
            reason: format!("[{}, {}] leaves the simulated span [{lo}, {hi}]", window.0, window.1),
        });
    }
    Ok(())
}

fn check_channel(ev: &Evolution, channel: usize) -> Result<()> {
    if channel >= ev.n_outputs() {
        return Err(Error::InvalidParameter {
            name: "channel",
            reason: format!("channel {channel} out of range ({} outputs)", ev.n_outputs()),
        });
    }
    Ok(())
}

/// Segments intersecting the window with their clipped spans.
fn overlapping(ev: &Evolution, window: (f64, f64)) -> impl Iterator<Item = (&Segment, f64, f64)> {
    ev.segments().iter().filter_map(move |seg| {
        let a = seg.start.max(window.0);
        let b = seg.end.min(window.1);
        (b > a).then_some((seg, a, b))
    })
}

fn trace_of(block: nalgebra::DVectorView<'_, C64>, tr: &DVector<C64>) -> f64 {
    tr.iter().zip(block.iter()).map(|(a, b)| a * b).sum::<C64>().re
}

fn counting_generator(seg: &Segment, channels: &[usize]) -> CMatrix {
    let n = seg.generator().matrix().nrows();
    let blocks = channels.len() + 1;
    let mut a = CMatrix::zeros(blocks * n, blocks * n);
    for i in 0..blocks {
        a.view_mut((i * n, i * n), (n, n)).copy_from(seg.generator().matrix());
    }
    for (i, &c) in channels.iter().enumerate() {
        let j = Superoperator::jump(seg.output(c));
        a.view_mut(((i + 1) * n, i * n), (n, n)).copy_from(j.matrix());
    }
    a
}

/// Ordered chain integrals `[I₁, …, I_m]` where `I_i` uses the first `i`
/// channels of `channels`, evaluated exactly per segment.
pub fn chain_integrals(ev: &Evolution, channels: &[usize], window: (f64, f64)) -> Result<Vec<f64>> {
    check_window(ev, window)?;
    for &c in channels {
        check_channel(ev, c)?;
    }
    let d = ev.dim();
    let n = d * d;
    let blocks = channels.len() + 1;
    let mut x = DVector::<C64>::zeros(blocks * n);
    x.rows_mut(0, n)
        .copy_from(&vectorize(ev.state_at(window.0)?.matrix()));
    for (seg, a, b) in overlapping(ev, window) {
        let gen = counting_generator(seg, channels) * C64::new(b - a, 0.0);
        x = expm(&gen) * x;
    }
    let tr = Superoperator::trace_functional(d);
    Ok((1..blocks).map(|i| trace_of(x.rows(i * n, n), &tr)).collect())
}

/// Same integrals by the iterated cumulative trapezoid rule on the grid.
///
/// `σ_i(t + h) = E σ_i(t) + h/2 (E J σ_{i−1}(t) + J σ_{i−1}(t + h))` with the
/// exact step propagator `E`; error is O(h²).
pub fn chain_integrals_trapezoid(
    ev: &Evolution,
    channels: &[usize],
    window: (f64, f64),
    grid: &GridSpec,
) -> Result<Vec<f64>> {
    check_window(ev, window)?;
    grid.validate()?;
    for &c in channels {
        check_channel(ev, c)?;
    }
    let d = ev.dim();
    let m = channels.len();
    let mut sigma: Vec<DVector<C64>> = vec![DVector::zeros(d * d); m + 1];
    sigma[0] = vectorize(ev.state_at(window.0)?.matrix());
    for (seg, a, b) in overlapping(ev, window) {
        let steps = steps_for(seg, a, b, grid);
        let h = (b - a) / steps as f64;
        let e = seg.step(h);
        let e = e.matrix();
        let jumps: Vec<CMatrix> = channels
            .iter()
            .map(|&c| Superoperator::jump(seg.output(c)).matrix().clone())
            .collect();
        let half_h = C64::new(0.5 * h, 0.0);
        for _ in 0..steps {
            let mut next: Vec<DVector<C64>> = Vec::with_capacity(m + 1);
            next.push(e * &sigma[0]);
            for i in 1..=m {
                let j = &jumps[i - 1];
                let src_old = j * &sigma[i - 1];
                let src_new = j * &next[i - 1];
                next.push(e * &sigma[i] + (e * src_old + src_new) * half_h);
            }
            sigma = next;
        }
    }
    let tr = Superoperator::trace_functional(d);
    Ok(sigma[1..]
        .iter()
        .map(|s| trace_of(s.rows(0, s.len()), &tr))
        .collect())
}

fn steps_for(seg: &Segment, a: f64, b: f64, grid: &GridSpec) -> usize {
    let full = seg.steps(grid) as f64;
    let frac = (b - a) / seg.duration();
    ((full * frac) - 1e-9).ceil().max(1.0) as usize
}

/// ∫ tr(L†L ρ) dt over the window by composite Simpson on the grid.
pub fn flux_integral(ev: &Evolution, channel: usize, window: (f64, f64), grid: &GridSpec) -> Result<f64> {
    check_window(ev, window)?;
    check_channel(ev, channel)?;
    grid.validate()?;
    let mut x = vectorize(ev.state_at(window.0)?.matrix());
    let mut total = 0.0;
    for (seg, a, b) in overlapping(ev, window) {
        let mut steps = steps_for(seg, a, b, grid).max(2);
        if steps % 2 == 1 {
            steps += 1;
        }
        let h = (b - a) / steps as f64;
        let e = seg.step(h);
        let l = seg.output(channel);
        let obs = (&l.dagger() * l).matrix().transpose();
        let w = vectorize(&obs);
        let f = |v: &DVector<C64>| -> f64 { w.iter().zip(v.iter()).map(|(p, q)| p * q).sum::<C64>().re };
        let mut acc = f(&x);
        for i in 1..=steps {
            x = e.matrix() * x;
            let weight = if i == steps {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += weight * f(&x);
        }
        total += acc * h / 3.0;
    }
    Ok(total)
}

/// G^(m)(t₁, …, t_m) = Tr[J P(t_m, t_{m−1}) ⋯ J ρ(t₁)] for one channel.
pub fn correlator_gm(ev: &Evolution, channel: usize, times: &[f64]) -> Result<f64> {
    correlator_chain(ev, &vec![channel; times.len()], times)
}

/// Mixed-channel correlator: jump `channels[i]` applied at `times[i]`.
pub fn correlator_chain(ev: &Evolution, channels: &[usize], times: &[f64]) -> Result<f64> {
    if times.is_empty() || channels.len() != times.len() {
        return Err(Error::InvalidParameter {
            name: "times",
            reason: "need one channel per time and at least one time".into(),
        });
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::UnsortedTimes);
    }
    for &c in channels {
        check_channel(ev, c)?;
    }
    let mut x = ev.state_at(times[0])?.matrix().clone();
    let mut t_prev = times[0];
    for (&t, &c) in times.iter().zip(channels) {
        x = ev.propagator(t_prev, t)?.apply(&x);
        let l = ev.segments()[ev.segment_at(t)].output(c);
        x = l.matrix() * x * l.matrix().adjoint();
        t_prev = t;
    }
    Ok(x.trace().re)
}

/// N₁..N_k of one output channel over `window`.
pub fn photon_mtiples(
    ev: &Evolution,
    channel: usize,
    window: (f64, f64),
    options: &CountingOptions,
) -> Result<Vec<f64>> {
    if options.cutoff == 0 {
        return Err(Error::InvalidParameter {
            name: "cutoff",
            reason: "cutoff must be at least 1".into(),
        });
    }
    ev.check_resolution(&options.grid);
    let chain = vec![channel; options.cutoff];
    match options.method {
        MtipleMethod::Exact => chain_integrals(ev, &chain, window),
        MtipleMethod::Trapezoid => chain_integrals_trapezoid(ev, &chain, window, &options.grid),
    }
}

/// m-tiples, inverted probabilities and the N₁ cross-check.
pub fn photon_statistics(
    ev: &Evolution,
    channel: usize,
    window: (f64, f64),
    options: &CountingOptions,
) -> Result<PhotonStatistics> {
    let n_tiples = photon_mtiples(ev, channel, window, options)?;
    let flux = flux_integral(ev, channel, window, &options.grid)?;
    let gap = (n_tiples[0] - flux).abs();
    if options.method == MtipleMethod::Exact && gap > N1_CROSS_CHECK {
        return Err(Error::Invariant(format!(
            "N1 = {:.12} from the correlator chain but {:.12} from the flux integral (gap {gap:.3e})",
            n_tiples[0], flux
        )));
    } else if gap > N1_CROSS_CHECK {
        warn!("N1 routes differ by {gap:.3e} with the trapezoid method");
    }
    let probabilities = sanitize_probabilities(invert_to_probabilities(&n_tiples))?;
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > 1e-6 {
        return Err(Error::Invariant(format!("probabilities sum to {total}")));
    }
    Ok(PhotonStatistics {
        n_tiples,
        probabilities,
        cutoff: options.cutoff,
        window,
        grid_step: options.grid.dt,
        n1_flux_integral: flux,
    })
}
