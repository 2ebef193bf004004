use crate::error::{Error, Result};
use crate::quantum::{liouvillian, lowering_op, sigma_z, Operator, Superoperator, C64};

use super::params::{Levels, MirrorQubitParams};

/// Output channels of the three-level ladder, in the order returned by
/// [`output_operators`].
pub mod ladder {
    pub const CHANNEL_01: usize = 0;
    pub const CHANNEL_12: usize = 1;
    pub const CHANNEL_02: usize = 2;
}

/// Γ_eff(φ) = Γ(1 + cos φ).
pub fn effective_coupling(gamma: f64, phi: f64) -> f64 {
    // clamp the rounding residue at φ = π
    (gamma * (1.0 + phi.cos())).max(0.0)
}

/// t_w = π / (2 α₀ √Γ_eff).
pub fn pi_pulse_width(alpha0: f64, gamma_eff: f64) -> Result<f64> {
    if !(alpha0 > 0.0 && alpha0.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "alpha0",
            reason: format!("pulse amplitude must be positive, got {alpha0}"),
        });
    }
    if !(gamma_eff > 0.0 && gamma_eff.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "gamma_eff",
            reason: format!("effective coupling must be positive, got {gamma_eff}"),
        });
    }
    Ok(std::f64::consts::PI / (2.0 * alpha0 * gamma_eff.sqrt()))
}

/// Rabi frequency Ω = 2|α₀|√Γ_eff of a resonant square drive.
pub fn rabi_frequency(alpha0: f64, gamma_eff: f64) -> f64 {
    2.0 * alpha0.abs() * gamma_eff.max(0.0).sqrt()
}

/// √(Γ/2)(1 + e^{iφ}): equal to e^{iφ/2}√Γ_eff for |φ| < π and continuous
/// through φ = π, as the feedback network gives it.
fn mirror_coupling(rate: f64, phi: f64) -> C64 {
    let magnitude = effective_coupling(rate, phi).sqrt() * (0.5 * phi).cos().signum();
    C64::from_polar(magnitude, phi / 2.0)
}

/// Coupling operators into the line at phase φ.
///
/// Two levels: `[L]` with `L = √Γ_eff e^{iφ/2} σ₋` (sign continued past φ = π).
/// Three levels: `[L₀₁, L₁₂, L₀₂]` (see [`ladder`]).
pub fn output_operators(params: &MirrorQubitParams, phi: f64) -> Vec<Operator> {
    match params.levels {
        Levels::Two => {
            let sm = lowering_op(2, 0, 1).expect("qubit indices");
            vec![sm.scale(mirror_coupling(params.gamma, phi))]
        }
        Levels::Three(r) => [(0, 1, r.gamma01), (1, 2, r.gamma12), (0, 2, r.gamma02)]
            .iter()
            .map(|&(lo, hi, rate)| {
                lowering_op(3, lo, hi)
                    .expect("ladder indices")
                    .scale(mirror_coupling(rate, phi))
            })
            .collect(),
    }
}

/// All collapse operators: the line outputs plus √Γ_nr σ₋.
pub fn collapse_operators(params: &MirrorQubitParams, phi: f64) -> Vec<Operator> {
    let mut ops = output_operators(params, phi);
    if params.gamma_nr > 0.0 {
        let sm = lowering_op(2, 0, 1).expect("qubit indices");
        ops.push(sm.scale(C64::new(params.gamma_nr.sqrt(), 0.0)));
    }
    ops
}

/// Rotating-frame Hamiltonian.
///
/// Two levels: `((Δ − (Γ/2) sin φ)/2) σ_z − i(α e^{iφ} L† − h.c.)`.
/// Three levels: `−Δ|2⟩⟨2| − i(α e^{iφ} L₀₂† − h.c.)`, drive on 0-2 only.
pub fn hamiltonian(params: &MirrorQubitParams, phi: f64, alpha: C64) -> Operator {
    let outputs = output_operators(params, phi);
    let (static_part, driven) = match params.levels {
        Levels::Two => {
            let coeff = (params.delta - 0.5 * params.gamma * phi.sin()) / 2.0;
            (sigma_z().scale(C64::new(coeff, 0.0)), &outputs[0])
        }
        Levels::Three(_) => (
            Operator::projector(3, 2).scale(C64::new(-params.delta, 0.0)),
            &outputs[ladder::CHANNEL_02],
        ),
    };
    if alpha.norm() == 0.0 {
        return static_part;
    }
    let x = driven.dagger().scale(alpha * C64::from_polar(1.0, phi));
    // −i(X − X†)
    let drive = (&x - &x.dagger()).scale(C64::new(0.0, -1.0));
    &static_part + &drive
}

/// The constant Liouvillian 𝓛(φ, α).
pub fn build_liouvillian(params: &MirrorQubitParams, phi: f64, alpha: C64) -> Result<Superoperator> {
    params.validate()?;
    liouvillian(&hamiltonian(params, phi, alpha), &collapse_operators(params, phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::LadderRates;
    use crate::quantum::{sup_exp, DensityMatrix};
    use crate::slh::{to_master_equation, SlhTriplet};
    use std::f64::consts::PI;

    #[test]
    fn effective_coupling_values() {
        assert_eq!(effective_coupling(1.0, 0.0), 2.0);
        assert!(effective_coupling(1.0, PI).abs() < 1e-300);
        assert!((effective_coupling(1.0, 0.9 * PI) - 0.048943).abs() < 1e-6);
    }

    #[test]
    fn pi_pulse_width_values() {
        assert!((pi_pulse_width(5.0, 1.0).unwrap() - PI / 10.0).abs() < 1e-15);
        assert!((pi_pulse_width(10.0, 1.0).unwrap() - 0.15708).abs() < 1e-5);
        assert!((pi_pulse_width(PI / 2.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(pi_pulse_width(0.0, 1.0).is_err());
        assert!(pi_pulse_width(1.0, 0.0).is_err());
    }

    #[test]
    fn undriven_decay_rate_is_gamma_eff() {
        let params = MirrorQubitParams::qubit(1.0);
        let lv = build_liouvillian(&params, 0.0, C64::new(0.0, 0.0)).unwrap();
        let out = lv.apply(DensityMatrix::basis(2, 1).matrix());
        assert!((out[(1, 1)].re + 2.0).abs() < 1e-14);
    }

    #[test]
    fn decoupled_at_pi() {
        let params = MirrorQubitParams::qubit(1.0).with_delta(0.3);
        let lv = build_liouvillian(&params, PI, C64::new(7.0, 1.0)).unwrap();
        let rho = DensityMatrix::pure(&[C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).unwrap();
        let p = sup_exp(&lv, 3.0).unwrap().apply(rho.matrix());
        assert!((p[(1, 1)].re - 0.64).abs() < 1e-12);
        assert!((p[(0, 0)].re - 0.36).abs() < 1e-12);
    }

    #[test]
    fn resonant_rabi_frequency() {
        // No damping contribution to the Rabi frequency: with Γ_eff tiny the
        // first full inversion happens at t = π/Ω.
        let params = MirrorQubitParams::qubit(1e-9);
        let alpha0 = 2.0e4;
        let gamma_eff = effective_coupling(params.gamma, 0.0);
        let omega = rabi_frequency(alpha0, gamma_eff);
        let lv = build_liouvillian(&params, 0.0, C64::new(alpha0, 0.0)).unwrap();
        let p = sup_exp(&lv, PI / omega).unwrap().apply(DensityMatrix::basis(2, 0).matrix());
        assert!((p[(1, 1)].re - 1.0).abs() < 1e-8);
    }

    #[test]
    fn matches_slh_master_equation() {
        for &(gamma, phi, delta, alpha) in &[
            (1.0, 0.0, 0.0, C64::new(5.0, 0.0)),
            (0.5, 0.9 * PI, 0.2, C64::new(1.0, -2.0)),
            (2.0, 2.0, -1.0, C64::new(0.0, 0.3)),
        ] {
            let params = MirrorQubitParams::qubit(gamma).with_delta(delta);
            let direct = build_liouvillian(&params, phi, alpha).unwrap();
            let (h, ls) = to_master_equation(&SlhTriplet::driven_mirror(gamma, phi, delta, alpha).unwrap());
            let via_slh = liouvillian(&h, &ls).unwrap();
            assert!(direct.max_abs_diff(&via_slh) < 1e-12);
        }
    }

    #[test]
    fn ladder_drive_only_on_zero_two() {
        let params = MirrorQubitParams::ladder(LadderRates::transmon());
        let h = hamiltonian(&params, 0.0, C64::new(5.0, 0.0));
        let m = h.matrix();
        assert_eq!(m[(0, 1)], C64::new(0.0, 0.0));
        assert_eq!(m[(1, 2)], C64::new(0.0, 0.0));
        // coupling α √(2Γ₀₂)
        assert!((m[(2, 0)].norm() - 5.0 * (0.1_f64).sqrt()).abs() < 1e-14);
        let outs = output_operators(&params, 0.0);
        assert!((outs[ladder::CHANNEL_12].matrix()[(1, 2)].re - 2.0).abs() < 1e-14);
    }

    #[test]
    fn ladder_rejects_nonradiative() {
        let params = MirrorQubitParams::ladder(LadderRates::transmon()).with_gamma_nr(0.1);
        assert!(build_liouvillian(&params, 0.0, C64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn nonradiative_adds_decay() {
        let params = MirrorQubitParams::qubit(0.5).with_gamma_nr(0.1);
        let lv = build_liouvillian(&params, 0.0, C64::new(0.0, 0.0)).unwrap();
        let out = lv.apply(DensityMatrix::basis(2, 1).matrix());
        assert!((out[(1, 1)].re + 1.1).abs() < 1e-14);
    }
}
