//! Conversion between photon m-tiples and number probabilities,
//! `N_m = Σ_{n=m}^k C(n, m) P_n`.

use log::warn;

use crate::error::{Error, Result};

/// Probabilities in `[−NEGATIVE_SLACK, 0)` are treated as quadrature noise.
pub const NEGATIVE_SLACK: f64 = 1e-3;

pub fn binomial(n: usize, m: usize) -> f64 {
    if m > n {
        return 0.0;
    }
    let m = m.min(n - m);
    (0..m).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// N₁..N_k from P₀..P_k.
pub fn mtiples_from_probabilities(p: &[f64]) -> Vec<f64> {
    let k = p.len().saturating_sub(1);
    (1..=k)
        .map(|m| (m..=k).map(|n| binomial(n, m) * p[n]).sum())
        .collect()
}

/// P₀..P_k from N₁..N_k by back-substitution of the triangular system,
/// with P₀ = 1 − Σ_{n≥1} P_n.
pub fn invert_to_probabilities(n_tiples: &[f64]) -> Vec<f64> {
    let k = n_tiples.len();
    let mut p = vec![0.0; k + 1];
    for m in (1..=k).rev() {
        let higher: f64 = (m + 1..=k).map(|n| binomial(n, m) * p[n]).sum();
        p[m] = n_tiples[m - 1] - higher;
    }
    p[0] = 1.0 - p[1..].iter().sum::<f64>();
    p
}

/// Closed-form inverse `P_n = Σ_{m=n}^k (−1)^{m−n} C(m, n) N_m`, with N₀ = 1.
pub fn invert_closed_form(n_tiples: &[f64]) -> Vec<f64> {
    let k = n_tiples.len();
    let n_at = |m: usize| if m == 0 { 1.0 } else { n_tiples[m - 1] };
    (0..=k)
        .map(|n| {
            (n..=k)
                .map(|m| {
                    let sign = if (m - n) % 2 == 0 { 1.0 } else { -1.0 };
                    sign * binomial(m, n) * n_at(m)
                })
                .sum()
        })
        .collect()
}

/// Clamps probabilities within the negative slack to zero and renormalizes.
/// Anything more negative is reported as a quadrature/cutoff failure.
pub fn sanitize_probabilities(mut p: Vec<f64>) -> Result<Vec<f64>> {
    let mut clamped = false;
    for (n, v) in p.iter_mut().enumerate() {
        if *v < -NEGATIVE_SLACK {
            return Err(Error::NegativeProbability { n, value: *v });
        }
        if *v < 0.0 {
            if *v < -1e-12 {
                warn!("clamping P_{n} = {v:.3e} to zero");
            }
            *v = 0.0;
            clamped = true;
        }
    }
    if clamped {
        let total: f64 = p.iter().sum();
        if total > 0.0 {
            p.iter_mut().for_each(|v| *v /= total);
        }
    }
    Ok(p)
}
