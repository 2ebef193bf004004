//! Storage time before release versus single-photon probability.

use photonforge::dynamics::MirrorQubitParams;
use photonforge::scenarios::{sweep_wait_time, WaitSweepConfig};

fn main() -> photonforge::Result<()> {
    let waits: Vec<f64> = (0..=10).map(|i| i as f64).collect();
    let rows = sweep_wait_time(&MirrorQubitParams::qubit(1.0), &WaitSweepConfig::default(), &waits)?;
    for row in rows {
        println!("t_wait = {:>4}  P0 = {:.4}  P1 = {:.4}", row.x, row.p(0), row.p(1));
    }
    Ok(())
}
