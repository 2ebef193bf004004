//! Square pulses that write μ|0⟩ + ν|1⟩ before release.

use std::f64::consts::PI;

use photonforge::dynamics::MirrorQubitParams;
use photonforge::scenarios::{encode_flying_qubit, EncodeConfig, FlyingQubitTarget};

fn main() -> photonforge::Result<()> {
    let params = MirrorQubitParams::qubit(1.0);
    let cfg = EncodeConfig::default();
    for (theta, azimuth) in [(PI, 0.0), (PI / 2.0, 0.0), (PI / 2.0, PI / 2.0), (PI / 3.0, 1.0)] {
        let target = FlyingQubitTarget::from_bloch(theta, azimuth);
        let r = encode_flying_qubit(&target, &params, &cfg)?;
        println!(
            "theta = {:.3}pi azimuth = {azimuth:.3}: delta = {:.4} alpha = {:.4} t_w = {:.5} infidelity = {:.1e}",
            theta / PI,
            r.delta,
            r.alpha,
            r.pulse_width,
            1.0 - r.fidelity
        );
    }
    Ok(())
}
