//! Excite at φ_i, store at φ = π, then release into a Gaussian packet.

use photonforge::dynamics::MirrorQubitParams;
use photonforge::scenarios::{run_shaped_release, ShapedReleaseConfig};

fn main() -> photonforge::Result<()> {
    let params = MirrorQubitParams::qubit(1.0);
    for alpha0 in [5.0, 10.0] {
        let r = run_shaped_release(&params, &ShapedReleaseConfig::new(alpha0))?;
        println!(
            "alpha0 = {alpha0}: P1 = {:.4}, flux L2 error {:.2e}, clipped {:.2e}",
            r.statistics.p(1),
            r.flux_l2_error.unwrap_or(f64::NAN),
            r.clipped_fraction
        );
    }
    let r = run_shaped_release(&params, &ShapedReleaseConfig::new(5.0))?;
    println!("     t     phi/pi   flux      target");
    let target = r.target_flux.as_deref().unwrap_or(&[]);
    for i in (0..r.times.len()).step_by(100) {
        println!(
            "{:6.2}  {:7.4}  {:.6}  {:.6}",
            r.times[i],
            r.phase[i] / std::f64::consts::PI,
            r.flux[i],
            target.get(i).copied().unwrap_or(0.0)
        );
    }
    Ok(())
}
