//! π-pulsed emitter whose reflected drive is cancelled on a beam splitter.

use photonforge::dynamics::MirrorQubitParams;
use photonforge::scenarios::{run_beam_splitter, BeamSplitterConfig};
use photonforge::statistics::CountingOptions;

fn main() -> photonforge::Result<()> {
    let params = MirrorQubitParams::qubit_with_effective_coupling(1.0);
    println!("alpha0      P0        P1        P2        P3");
    for alpha0 in [1.0, 2.5, 5.0, 7.5, 10.0] {
        let cfg = BeamSplitterConfig::new(0.995, alpha0)?;
        let s = run_beam_splitter(&params, &cfg, &CountingOptions::default())?;
        println!("{alpha0:>6.1}  {:.6}  {:.6}  {:.6}  {:.6}", s.p(0), s.p(1), s.p(2), s.p(3));
    }
    Ok(())
}
