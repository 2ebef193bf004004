//! Residual of two-path cancellation and the tolerances a target level needs.

use photonforge::scenarios::{cancellation_budget, error_budget, CancellationInputs};

fn main() -> photonforge::Result<()> {
    let base = CancellationInputs::matched(1.0, 0.0, 0.0, 0.0);
    for delta in [0.0, 0.001, 0.01, 0.04, 0.1] {
        let r = cancellation_budget(&base.with_phase_error(delta))?;
        println!("phase error {delta:<6} residual {:.3e} ({:.2} dB)", r.residual, r.residual_db);
    }
    for ratio in [0.99, 0.98, 0.9] {
        let r = cancellation_budget(&base.with_amplitude_ratio(ratio))?;
        println!("amplitude ratio {ratio:<5} residual {:.3e} ({:.2} dB)", r.residual, r.residual_db);
    }
    for db in [-34.0, -50.0] {
        let b = error_budget(db);
        println!("{db} dB needs amplitude error <= {:.4} or phase error <= {:.4} rad", b.amplitude_error, b.phase_error);
    }
    Ok(())
}
