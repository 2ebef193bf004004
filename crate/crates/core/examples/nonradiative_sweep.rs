//! Beam-splitter source efficiency with extra non-radiative decay.

use photonforge::dynamics::MirrorQubitParams;
use photonforge::scenarios::{sweep_nonradiative, BeamSplitterConfig};
use photonforge::statistics::CountingOptions;

fn main() -> photonforge::Result<()> {
    let params = MirrorQubitParams::qubit_with_effective_coupling(1.0);
    let cfg = BeamSplitterConfig::new(0.995, 10.0)?;
    let rates = [0.0, 0.05, 0.1, 0.2, 0.5, 1.0];
    for row in sweep_nonradiative(&params, &cfg, &CountingOptions::default(), &rates)? {
        println!("gamma_nr = {:<5} P0 = {:.4}  P1 = {:.4}", row.x, row.p(0), row.p(1));
    }
    Ok(())
}
