use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use proptest::prelude::*;

use photonforge::cli::{parse_number, sig12};
use photonforge::dynamics::{build_liouvillian, DriveSchedule, Evolution, GridSpec, MirrorQubitParams, PhaseSchedule};
use photonforge::quantum::{lowering_op, sigma_z, sup_exp, DensityMatrix, C64};
use photonforge::scenarios::{residual_factor, residual_phasor, sweep_nonradiative, BeamSplitterConfig};
use photonforge::slh::{mirror_closed_form, series, Coupling, SlhTriplet};
use photonforge::statistics::{
    chain_integrals, flux_integral, invert_closed_form, invert_to_probabilities, mtiples_from_probabilities,
    CountingOptions,
};

fn pure_qubit(theta: f64, az: f64) -> DensityMatrix {
    DensityMatrix::pure(&[
        C64::new((theta / 2.0).cos(), 0.0),
        C64::from_polar((theta / 2.0).sin(), az),
    ])
    .unwrap()
}

fn qubit_params() -> impl Strategy<Value = (MirrorQubitParams, f64, C64)> {
    (0.0..3.0f64, -3.0..3.0f64, 0.0..1.0f64, 0.0..TAU, -5.0..5.0f64, -5.0..5.0f64).prop_map(
        |(g, d, nr, phi, ar, ai)| (MirrorQubitParams::qubit(g).with_delta(d).with_gamma_nr(nr), phi, C64::new(ar, ai)),
    )
}

fn one_port_triplet() -> impl Strategy<Value = SlhTriplet> {
    (0.0..TAU, -2.0..2.0f64, -2.0..2.0f64, -1.0..1.0f64, -1.0..1.0f64, -2.0..2.0f64).prop_map(
        |(s_phase, lr, li, off_r, off_i, hz)| {
            let l = lowering_op(2, 0, 1).unwrap().scale(C64::new(lr, li));
            SlhTriplet::new(
                DMatrix::from_element(1, 1, C64::from_polar(1.0, s_phase)),
                vec![Coupling::new(l, C64::new(off_r, off_i))],
                sigma_z().scale(C64::new(hz, 0.0)),
            )
            .unwrap()
        },
    )
}

fn triplet_gap(a: &SlhTriplet, b: &SlhTriplet) -> f64 {
    let s = (a.scattering() - b.scattering()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let l = a
        .couplings()
        .iter()
        .zip(b.couplings())
        .map(|(x, y)| x.full().max_abs_diff(&y.full()))
        .fold(0.0, f64::max);
    s.max(l).max(a.hamiltonian().max_abs_diff(b.hamiltonian()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn propagator_preserves_trace_and_positivity(
        (params, phi, alpha) in qubit_params(),
        t in 0.0..5.0f64,
        theta in 0.0..PI,
        az in 0.0..TAU,
    ) {
        let lv = build_liouvillian(&params, phi, alpha).unwrap();
        let rho = sup_exp(&lv, t).unwrap().apply(pure_qubit(theta, az).matrix());
        prop_assert!((rho.trace() - C64::new(1.0, 0.0)).norm() < 1e-8);
        prop_assert!((&rho - rho.adjoint()).iter().all(|z| z.norm() < 1e-10));
        let state = DensityMatrix::new(rho).unwrap();
        prop_assert!(state.min_eigenvalue() > -1e-9);
    }

    #[test]
    fn binomial_round_trip(raw in prop::collection::vec(0.0..1.0f64, 2..8)) {
        let total: f64 = raw.iter().sum();
        prop_assume!(total > 1e-3);
        let p: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let n = mtiples_from_probabilities(&p);
        let back = invert_to_probabilities(&n);
        for (a, b) in p.iter().zip(&back) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        let closed = invert_closed_form(&n);
        for (a, b) in back.iter().zip(&closed) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn series_is_associative(a in one_port_triplet(), b in one_port_triplet(), c in one_port_triplet()) {
        let left = series(&series(&a, &b).unwrap(), &c).unwrap();
        let right = series(&a, &series(&b, &c).unwrap()).unwrap();
        prop_assert!(triplet_gap(&left, &right) < 1e-12);
    }

    #[test]
    fn mirror_network_reduces_to_closed_form(gamma in 0.0..5.0f64, phi in (-PI + 1e-3)..(PI - 1e-3), delta in -5.0..5.0f64) {
        let g = SlhTriplet::atom_in_front_of_mirror(gamma, phi, delta).unwrap();
        prop_assert!(triplet_gap(&g, &mirror_closed_form(gamma, phi, delta)) < 1e-12);
    }

    #[test]
    fn counting_ignores_global_drive_phase(alpha in 0.5..6.0f64, theta in 0.0..TAU, phi in 0.0..PI) {
        let params = MirrorQubitParams::qubit(1.0);
        let drive = DriveSchedule::square_pulse(C64::new(alpha, 0.0), 1.0, 0.4).unwrap();
        let build = |d: &DriveSchedule| {
            Evolution::build(&params, d, &PhaseSchedule::constant(phi), DensityMatrix::basis(2, 0), (0.0, 6.0), &[]).unwrap()
        };
        let a = chain_integrals(&build(&drive), &[0, 0], (0.5, 6.0)).unwrap();
        let b = chain_integrals(&build(&drive.rotated(theta)), &[0, 0], (0.5, 6.0)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn single_photon_flux_routes_agree(alpha in 1.0..10.0f64, r in 0.5..1.0f64) {
        let params = MirrorQubitParams::qubit_with_effective_coupling(1.0);
        let cfg = BeamSplitterConfig::new(r, alpha).unwrap();
        let ev = photonforge::scenarios::beam_splitter_evolution(&params, &cfg).unwrap();
        let window = (cfg.t0, cfg.t_end);
        let n1 = chain_integrals(&ev, &[0], window).unwrap()[0];
        let flux = flux_integral(&ev, 0, window, &GridSpec::with_dt(0.01)).unwrap();
        prop_assert!((n1 - flux).abs() < 1e-6);
    }

    #[test]
    fn residual_matches_phasor(ratio in 0.0..2.0f64, delta in -PI..PI) {
        let r = residual_factor(ratio, delta);
        prop_assert!(r >= 0.0);
        prop_assert!((r - residual_phasor(ratio, delta).norm()).abs() < 1e-12);
    }

    #[test]
    fn csv_numbers_keep_twelve_digits(x in prop::num::f64::NORMAL) {
        let back = parse_number(&sig12(x)).unwrap();
        prop_assert!(((back - x) / x).abs() < 1e-11);
    }
}

#[test]
fn sweep_rows_follow_input_order() {
    let params = MirrorQubitParams::qubit_with_effective_coupling(1.0);
    let cfg = BeamSplitterConfig::new(0.995, 10.0).unwrap();
    let opts = CountingOptions::default();
    let forward = sweep_nonradiative(&params, &cfg, &opts, &[0.0, 0.1, 0.5, 1.0]).unwrap();
    let reversed = sweep_nonradiative(&params, &cfg, &opts, &[1.0, 0.5, 0.1, 0.0]).unwrap();
    for (a, b) in forward.iter().zip(reversed.iter().rev()) {
        assert_eq!(a, b);
    }
}

#[test]
fn stored_excitation_emits_no_pairs() {
    // a single excitation released with no drive: G2 vanishes identically
    let params = MirrorQubitParams::qubit(1.0);
    let ev = Evolution::build(
        &params,
        &DriveSchedule::none(),
        &PhaseSchedule::constant(0.7),
        DensityMatrix::basis(2, 1),
        (0.0, 8.0),
        &[],
    )
    .unwrap();
    for &(t1, t2) in &[(0.0, 0.0), (0.1, 0.5), (1.0, 4.0), (2.0, 7.9)] {
        let g2 = photonforge::statistics::correlator_gm(&ev, 0, &[t1, t2]).unwrap();
        assert!(g2.abs() < 1e-15, "{g2}");
    }
    let n = chain_integrals(&ev, &[0, 0, 0], (0.0, 8.0)).unwrap();
    assert!(n[1].abs() < 1e-15 && n[2].abs() < 1e-15);
    let gamma_eff = 1.0 + 0.7f64.cos();
    assert!((n[0] - (1.0 - (-gamma_eff * 8.0).exp())).abs() < 1e-12);
}
