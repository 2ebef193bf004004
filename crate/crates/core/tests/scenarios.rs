mod common;

use std::f64::consts::PI;

use photonforge::dynamics::{output_operators, pi_pulse_width, LadderRates, MirrorQubitParams};
use photonforge::quantum::{CMatrix, C64};
use photonforge::scenarios::{
    beam_splitter_evolution, cancellation_budget, encode_flying_qubit, error_budget, exceeds_anharmonicity,
    run_beam_splitter, run_cascade, run_shaped_release, shape_to_schedule, shape_to_schedule_with_budget,
    sweep_nonradiative, sweep_wait_time, BeamSplitterConfig, CancellationInputs, CascadeConfig, EncodeConfig,
    FlyingQubitTarget, Release, ShapedReleaseConfig, WaitSweepConfig, WavePacket,
};
use photonforge::statistics::{photon_statistics, CountingOptions};
use photonforge::Error;

fn unit_qubit() -> MirrorQubitParams {
    MirrorQubitParams::qubit_with_effective_coupling(1.0)
}

#[test]
fn weak_drive_leaves_vacuum() {
    let opts = CountingOptions::default();
    let zero = run_beam_splitter(&unit_qubit(), &BeamSplitterConfig::new(0.995, 0.0).unwrap(), &opts).unwrap();
    assert!((zero.p(0) - 1.0).abs() < 1e-12);
    // the π-pulse lengthens as α₀ shrinks, so vacuum is approached only linearly
    let p0: Vec<f64> = [0.05, 0.01, 0.003]
        .iter()
        .map(|&a| {
            let cfg = BeamSplitterConfig::new(0.995, a).unwrap();
            run_beam_splitter(&unit_qubit(), &cfg, &opts).unwrap().p(0)
        })
        .collect();
    assert!(p0[0] < p0[1] && p0[1] < p0[2]);
    assert!(p0[2] > 0.999);
}

#[test]
fn full_reflection_is_bare_emission() {
    let params = unit_qubit();
    let cfg = BeamSplitterConfig::new(1.0, 5.0).unwrap();
    let opts = CountingOptions::default();
    let window = (cfg.t0, cfg.t_end);
    let via_bs = run_beam_splitter(&params, &cfg, &opts).unwrap();
    let bare_ev = beam_splitter_evolution(&params, &cfg)
        .unwrap()
        .with_outputs(|s| output_operators(&params, s.phi));
    let bare = photon_statistics(&bare_ev, 0, window, &opts).unwrap();
    for m in 1..=3 {
        assert!((via_bs.n(m) - bare.n(m)).abs() < 1e-14);
    }

    // m-tiples scale with r^{2m}
    let r = 0.8;
    let scaled = run_beam_splitter(&params, &BeamSplitterConfig::new(r, 5.0).unwrap(), &opts).unwrap();
    for m in 1..=3 {
        let want = r.powi(2 * m as i32) * bare.n(m);
        assert!((scaled.n(m) - want).abs() < 1e-12 * (1.0 + want), "m = {m}");
    }
}

#[test]
fn beam_splitter_rejects_bad_reflection() {
    assert!(BeamSplitterConfig::new(1.2, 5.0).is_err());
    assert!(BeamSplitterConfig::new(-0.1, 5.0).is_err());
    let cfg = BeamSplitterConfig::new(0.6, 1.0).unwrap();
    assert!((cfg.r * cfg.r + cfg.tau() * cfg.tau() - 1.0).abs() < 1e-12);
}

#[test]
fn beta_mismatch_leaks_coherent_light() {
    let params = unit_qubit();
    let opts = CountingOptions::default();
    let exact = run_beam_splitter(&params, &BeamSplitterConfig::new(0.995, 5.0).unwrap(), &opts).unwrap();
    let mut cfg = BeamSplitterConfig::new(0.995, 5.0).unwrap();
    cfg.beta_phase_error = 0.2;
    let leaky = run_beam_splitter(&params, &cfg, &opts).unwrap();
    assert!(leaky.n(1) > exact.n(1));
}

#[test]
fn exponential_packet_holds_one_phase() {
    let packet = WavePacket::exponential(0.8, 12.0, 0.01).unwrap();
    let sched = shape_to_schedule(&packet, 1.0, 8.0).unwrap();
    for &r in &sched.rates {
        assert!((r - 0.8).abs() < 1e-9);
    }
    let phi = sched.ramp.values()[0];
    assert!((phi - (0.8f64 - 1.0).acos()).abs() < 1e-9);
    assert!(sched.ramp.values().iter().all(|&v| (v - phi).abs() < 1e-9));
    assert!(sched.clipped_fraction < 1e-12);
}

#[test]
fn exponential_release_follows_target() {
    let params = MirrorQubitParams::qubit(1.0);
    for kappa in [0.5, 1.0] {
        let packet = WavePacket::exponential(kappa, 12.0, 0.01).unwrap();
        let cfg = ShapedReleaseConfig::new(5.0).with_release(Release::Packet(packet));
        let res = run_shaped_release(&params, &cfg).unwrap();
        assert!(res.flux_l2_error.unwrap() < 0.01, "kappa = {kappa}");
    }
}

#[test]
fn gaussian_rates_rise_and_clip() {
    let packet = WavePacket::default_gaussian(1.0).unwrap();
    let sched = shape_to_schedule(&packet, 1.0, 8.0).unwrap();
    let n = sched.target_rates.len();
    assert!(sched.target_rates[n / 2] > sched.target_rates[n / 4]);
    assert!(sched.target_rates[n - 2] > 2.0);
    assert_eq!(sched.rates[n - 2], 2.0);
    assert!(sched.clipped_fraction > 0.0 && sched.clipped_fraction < 0.01);

    let res = run_shaped_release(&MirrorQubitParams::qubit(1.0), &ShapedReleaseConfig::new(5.0)).unwrap();
    assert!(res.flux_l2_error.unwrap() < 0.03);
}

#[test]
fn hard_cutoff_engages_clipping() {
    let times: Vec<f64> = (0..=200).map(|i| i as f64 * 0.01).collect();
    let flat = vec![C64::new(1.0, 0.0); times.len()];
    let packet = WavePacket::from_samples(times, flat).unwrap();
    let loose = shape_to_schedule_with_budget(&packet, 1.0, 0.0, 1.0).unwrap();
    assert!(loose.clipped_fraction > 0.01);
    assert!(loose.target_rates.last().unwrap() > &100.0);

    match shape_to_schedule_with_budget(&packet, 1.0, 0.0, 0.05) {
        Err(Error::ClipBudgetExceeded {
            fraction, minimal_gamma, ..
        }) => {
            assert!(fraction > 0.05);
            assert!(minimal_gamma > 1.0);
            let ok = shape_to_schedule_with_budget(&packet, minimal_gamma, 0.0, 0.05).unwrap();
            assert!(ok.clipped_fraction <= 0.05);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn cascade_without_drive_is_vacuum() {
    let res = run_cascade(&CascadeConfig::new(LadderRates::transmon(), 0.0)).unwrap();
    assert_eq!(res.v, 0.0);
}

#[test]
fn nonradiative_band() {
    let params = unit_qubit();
    let cfg = BeamSplitterConfig::new(0.995, 10.0).unwrap();
    let rows = sweep_nonradiative(&params, &cfg, &CountingOptions::default(), &[0.0, 0.1, 0.2]).unwrap();
    assert!((rows[0].p(1) - 0.97).abs() < 0.015);
    for row in &rows[1..] {
        assert!((0.8..=0.9).contains(&row.p(1)), "{row:?}");
    }
}

#[test]
fn long_wait_loses_the_photon() {
    let rows = sweep_wait_time(&MirrorQubitParams::qubit(1.0), &WaitSweepConfig::default(), &[60.0]).unwrap();
    assert!(rows[0].p(1) < 0.01);
    assert!(rows[0].p(0) > 0.99);
}

#[test]
fn anharmonicity_guard_boundary() {
    // 2·α·√Γ_eff = 50 exactly at α = 25, Γ_eff = 1
    assert!(exceeds_anharmonicity(25.0, 1.0, 50.0));
    assert!(!exceeds_anharmonicity(24.999, 1.0, 50.0));
    assert!(exceeds_anharmonicity(12.5, 4.0, 50.0));
}

#[test]
fn encode_excited_is_a_pi_pulse() {
    let params = MirrorQubitParams::qubit(1.0);
    let cfg = EncodeConfig::default();
    let target = FlyingQubitTarget::from_bloch(PI, 0.0);
    let res = encode_flying_qubit(&target, &params, &cfg).unwrap();
    let lamb = 0.5 * cfg.phi.sin();
    assert!((res.delta - lamb).abs() < 1e-2);
    let geff = 1.0 + cfg.phi.cos();
    let want = pi_pulse_width(res.alpha.norm(), geff).unwrap();
    assert!((res.pulse_width - want).abs() < 1e-3 * want);
    assert!(1.0 - res.fidelity < 1e-4);
}

fn ode_fidelity(phi: f64, delta: f64, alpha: C64, width: f64, target: &FlyingQubitTarget, rtol: f64) -> f64 {
    let model = common::qubit_model(1.0, delta, 0.0, phi, alpha);
    let f = |_: f64, y: &[C64]| {
        let rho = CMatrix::from_column_slice(2, 2, y);
        common::lindblad(&model, &rho).iter().copied().collect::<Vec<_>>()
    };
    let y0 = [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    let rho = CMatrix::from_column_slice(2, 2, &common::dopri5(&f, 0.0, width, &y0, rtol, 1e-14));
    let psi = nalgebra::DVector::from_column_slice(&target.amplitudes());
    (psi.adjoint() * rho * psi)[(0, 0)].re
}

#[test]
fn encode_half_target_beats_grid_oracle() {
    let cfg = EncodeConfig::default();
    let params = MirrorQubitParams::qubit(1.0);
    let target = FlyingQubitTarget::from_bloch(PI / 2.0, 0.0);
    let res = encode_flying_qubit(&target, &params, &cfg).unwrap();

    let lamb = 0.5 * cfg.phi.sin();
    let sqrt_geff = (1.0 + cfg.phi.cos()).sqrt();
    let mut best = 0.0f64;
    for ia in 0..16 {
        let arg = 2.0 * PI * ia as f64 / 16.0;
        for ig in 1..=4 {
            let rabi = 5.0 * ig as f64;
            for iw in 0..12 {
                // half-area pulse width (π/2)/Ω ± 15%
                let width = PI / (2.0 * rabi) * (0.85 + 0.3 * iw as f64 / 11.0);
                let alpha = C64::from_polar(rabi / (2.0 * sqrt_geff), arg);
                best = best.max(ode_fidelity(cfg.phi, lamb, alpha, width, &target, 1e-10));
            }
        }
    }
    let check = ode_fidelity(cfg.phi, res.delta, res.alpha, res.pulse_width, &target, 1e-12);
    assert!((check - res.fidelity).abs() < 1e-9, "{check} vs {}", res.fidelity);
    assert!(res.fidelity >= best - 1e-12, "{} < grid {best}", res.fidelity);
    assert!(1.0 - res.fidelity < 1e-4);
    // optimum stays near a half-area pulse
    let area = 2.0 * res.alpha.norm() * sqrt_geff * res.pulse_width;
    assert!((area - PI / 2.0).abs() < 0.05, "area {area}");
}

#[test]
fn cancellation_examples() {
    let exact = cancellation_budget(&CancellationInputs::matched(1.0, 0.2, 0.4, 1.0)).unwrap();
    assert_eq!(exact.residual, 0.0);

    let phase = cancellation_budget(&CancellationInputs::matched(1.0, 0.0, 0.0, 0.0).with_phase_error(0.04)).unwrap();
    let want = 2.0 * 0.02f64.sin();
    assert!((phase.residual - want).abs() < 1e-15);
    assert!((phase.residual_db + 28.0).abs() < 0.1);

    let amp = cancellation_budget(&CancellationInputs::matched(1.0, 0.0, 0.0, 0.0).with_amplitude_ratio(0.98)).unwrap();
    assert!((amp.residual - 0.02).abs() < 1e-12);
    let b = error_budget(-34.0);
    assert!((b.amplitude_error - 0.02).abs() < 1e-3);

    let mut beat = CancellationInputs::matched(1.0, 0.0, 0.0, 1.0);
    beat.omega2 = 1.5;
    assert_eq!(cancellation_budget(&beat).unwrap().residual, 2.0);
}
