//! Independent reference: Lindblad equation in matrix form, integrated by an
//! adaptive Dormand–Prince 5(4) scheme. Shares no code with the library
//! propagators; only the piecewise schedule is read off an `Evolution`.

#![allow(dead_code)]

use photonforge::dynamics::{Evolution, LadderRates, Levels, MirrorQubitParams, Segment};
use photonforge::quantum::{CMatrix, C64};

pub const RTOL: f64 = 1e-12;
pub const ATOL: f64 = 1e-14;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// H plus collapse operators, plain matrices.
#[derive(Debug, Clone)]
pub struct Model {
    pub h: CMatrix,
    pub collapse: Vec<CMatrix>,
}

fn lowering(dim: usize, lo: usize, hi: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    m[(lo, hi)] = c(1.0);
    m
}

/// e^{iφ/2}√(Γ(1+cos φ)) with the sign of cos(φ/2), continuous in φ.
fn line_coupling(rate: f64, phi: f64) -> C64 {
    let magnitude = (rate * (1.0 + phi.cos())).max(0.0).sqrt();
    C64::from_polar(magnitude * (phi / 2.0).cos().signum(), phi / 2.0)
}

fn drive_term(l: &CMatrix, phi: f64, alpha: C64) -> CMatrix {
    let x = l.adjoint() * (alpha * C64::from_polar(1.0, phi));
    (&x - x.adjoint()) * C64::new(0.0, -1.0)
}

/// Qubit at round-trip phase φ driven with amplitude α.
pub fn qubit_model(gamma: f64, delta: f64, gamma_nr: f64, phi: f64, alpha: C64) -> Model {
    let sm = lowering(2, 0, 1);
    let l = &sm * line_coupling(gamma, phi);
    let mut sz = CMatrix::zeros(2, 2);
    sz[(0, 0)] = c(1.0);
    sz[(1, 1)] = c(-1.0);
    let h = sz * c((delta - 0.5 * gamma * phi.sin()) / 2.0) + drive_term(&l, phi, alpha);
    let mut collapse = vec![l];
    if gamma_nr > 0.0 {
        collapse.push(sm * c(gamma_nr.sqrt()));
    }
    Model { h, collapse }
}

/// Three-level ladder, collapse order 0-1, 1-2, 0-2; drive on 0-2.
pub fn ladder_model(rates: LadderRates, delta: f64, phi: f64, alpha: C64) -> Model {
    let l01 = lowering(3, 0, 1) * line_coupling(rates.gamma01, phi);
    let l12 = lowering(3, 1, 2) * line_coupling(rates.gamma12, phi);
    let l02 = lowering(3, 0, 2) * line_coupling(rates.gamma02, phi);
    let mut h = CMatrix::zeros(3, 3);
    h[(2, 2)] = c(-delta);
    h += drive_term(&l02, phi, alpha);
    Model {
        h,
        collapse: vec![l01, l12, l02],
    }
}

pub fn model_for(params: &MirrorQubitParams, phi: f64, alpha: C64) -> Model {
    match params.levels {
        Levels::Two => qubit_model(params.gamma, params.delta, params.gamma_nr, phi, alpha),
        Levels::Three(r) => ladder_model(r, params.delta, phi, alpha),
    }
}

pub fn lindblad(m: &Model, rho: &CMatrix) -> CMatrix {
    let mi = C64::new(0.0, -1.0);
    let mut out = (&m.h * rho - rho * &m.h) * mi;
    for l in &m.collapse {
        let ld = l.adjoint();
        let ll = &ld * l;
        out += l * rho * &ld - (&ll * rho + rho * &ll) * c(0.5);
    }
    out
}

/// One constant stretch of the schedule.
#[derive(Debug, Clone)]
pub struct Piece {
    pub start: f64,
    pub end: f64,
    pub model: Model,
    /// Detected-mode operators, one per output channel.
    pub outputs: Vec<CMatrix>,
}

/// Rebuilds every segment's dynamics from `params`; detected outputs are
/// taken from the evolution since scenarios may redefine them.
pub fn pieces(ev: &Evolution, params: &MirrorQubitParams) -> Vec<Piece> {
    ev.segments()
        .iter()
        .map(|s: &Segment| Piece {
            start: s.start,
            end: s.end,
            model: model_for(params, s.phi, s.alpha),
            outputs: s.outputs().iter().map(|o| o.matrix().clone()).collect(),
        })
        .collect()
}

/// Adaptive Dormand–Prince 5(4) from `t0` to `t1`.
pub fn dopri5(f: &dyn Fn(f64, &[C64]) -> Vec<C64>, t0: f64, t1: f64, y0: &[C64], rtol: f64, atol: f64) -> Vec<C64> {
    const A: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const CN: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut t = t0;
    let span = t1 - t0;
    if span <= 0.0 {
        return y;
    }
    let mut h = (span / 100.0).min(1e-2);
    let mut k: Vec<Vec<C64>> = vec![vec![C64::new(0.0, 0.0); n]; 7];
    k[0] = f(t, &y);
    while t < t1 {
        if t + h > t1 {
            h = t1 - t;
        }
        let mut tmp = vec![C64::new(0.0, 0.0); n];
        for s in 1..7 {
            for i in 0..n {
                let mut acc = y[i];
                for j in 0..s {
                    acc += k[j][i] * (h * A[s - 1][j]);
                }
                tmp[i] = acc;
            }
            k[s] = f(t + CN[s] * h, &tmp);
        }
        // the 7th stage is evaluated at the 5th-order solution (FSAL)
        let y_new = tmp;
        let mut err = 0.0;
        for i in 0..n {
            let mut e = C64::new(0.0, 0.0);
            for j in 0..7 {
                let b5 = if j < 6 { A[5][j] } else { 0.0 };
                e += k[j][i] * (h * (b5 - B4[j]));
            }
            let scale = atol + rtol * y[i].norm().max(y_new[i].norm());
            err += (e.norm() / scale).powi(2);
        }
        let err = (err / n as f64).sqrt();
        if err <= 1.0 {
            t += h;
            y = y_new;
            k[0] = k[6].clone();
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        assert!(h > 1e-14 * (1.0 + t.abs()), "step size underflow at t = {t}");
    }
    y
}

fn flatten(ms: &[CMatrix]) -> Vec<C64> {
    ms.iter().flat_map(|m| m.iter().copied()).collect()
}

fn unflatten(v: &[C64], dim: usize) -> Vec<CMatrix> {
    v.chunks(dim * dim)
        .map(|ch| CMatrix::from_column_slice(dim, dim, ch))
        .collect()
}

/// Integrates ρ across the pieces and returns it at each sorted time.
pub fn states(initial: &CMatrix, pieces: &[Piece], times: &[f64]) -> Vec<CMatrix> {
    let dim = initial.nrows();
    let mut rho = initial.clone();
    let mut t = pieces[0].start;
    let mut out = Vec::with_capacity(times.len());
    let mut next = 0;
    for p in pieces {
        let f = |_: f64, y: &[C64]| flatten(&[lindblad(&p.model, &unflatten(y, dim)[0])]);
        while next < times.len() && times[next] <= p.end {
            let y = dopri5(&f, t, times[next], &flatten(&[rho.clone()]), RTOL, ATOL);
            rho = unflatten(&y, dim).remove(0);
            t = times[next];
            out.push(rho.clone());
            next += 1;
        }
        let y = dopri5(&f, t, p.end, &flatten(&[rho.clone()]), RTOL, ATOL);
        rho = unflatten(&y, dim).remove(0);
        t = p.end;
    }
    assert_eq!(out.len(), times.len(), "times beyond the schedule");
    out
}

/// Ordered chain integrals `∫_{t₁<…<t_i}` with jumps `channels[0..i]`, from
/// the augmented system σ_i' = 𝓛σ_i + J_{c_i} σ_{i−1}.
pub fn chain(initial: &CMatrix, pieces: &[Piece], channels: &[usize], window: (f64, f64)) -> Vec<f64> {
    let dim = initial.nrows();
    let rho0 = states(initial, pieces, &[window.0]).remove(0);
    let blocks = channels.len() + 1;
    let mut sig = vec![CMatrix::zeros(dim, dim); blocks];
    sig[0] = rho0;
    let mut t = window.0;
    for p in pieces {
        let (a, b) = (p.start.max(window.0), p.end.min(window.1));
        if b <= a {
            continue;
        }
        let f = |_: f64, y: &[C64]| {
            let s = unflatten(y, dim);
            let mut d: Vec<CMatrix> = s.iter().map(|x| lindblad(&p.model, x)).collect();
            for (i, &ch) in channels.iter().enumerate() {
                let o = &p.outputs[ch];
                d[i + 1] += o * &s[i] * o.adjoint();
            }
            flatten(&d)
        };
        debug_assert!((t - a).abs() < 1e-9);
        let y = dopri5(&f, a, b, &flatten(&sig), RTOL, ATOL);
        sig = unflatten(&y, dim);
        t = b;
    }
    sig[1..].iter().map(|s| s.trace().re).collect()
}

/// Ordered m-tiples of one channel, m = 1..=k.
pub fn mtiples(initial: &CMatrix, pieces: &[Piece], channel: usize, window: (f64, f64), k: usize) -> Vec<f64> {
    chain(initial, pieces, &vec![channel; k], window)
}

/// P_n = Σ_m (−1)^{m−n} C(m, n) N_m, written out directly.
pub fn probabilities(n_tiples: &[f64]) -> Vec<f64> {
    let k = n_tiples.len();
    let mut full = vec![1.0];
    full.extend_from_slice(n_tiples);
    (0..=k)
        .map(|n| {
            (n..=k)
                .map(|m| {
                    let mut binom = 1.0;
                    for j in 0..n {
                        binom *= (m - j) as f64 / (j + 1) as f64;
                    }
                    let sign = if (m - n) % 2 == 0 { 1.0 } else { -1.0 };
                    sign * binom * full[m]
                })
                .sum()
        })
        .collect()
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
