//! Low-level counting: m-tiples of a hand-built evolution, inversion to P_n
//! and a two-time correlator.

use photonforge::dynamics::{DriveSchedule, Evolution, MirrorQubitParams, PhaseSchedule};
use photonforge::quantum::{DensityMatrix, C64};
use photonforge::statistics::{correlator_gm, photon_statistics, CountingOptions};

fn main() -> photonforge::Result<()> {
    let params = MirrorQubitParams::qubit(1.0);
    // weak resonance fluorescence for five lifetimes
    let drive = DriveSchedule::square_pulse(C64::new(0.3, 0.0), 1.0, 5.0)?;
    let ev = Evolution::build(&params, &drive, &PhaseSchedule::constant(0.0), DensityMatrix::basis(2, 0), (0.0, 12.0), &[])?;
    let options = CountingOptions {
        cutoff: 5,
        ..CountingOptions::default()
    };
    let s = photon_statistics(&ev, 0, (0.0, 12.0), &options)?;
    println!("N_m = {:?}", s.n_tiples);
    println!("P_n = {:?} (sum {:.12})", s.probabilities, s.total_probability());
    println!("N1 by flux quadrature = {:.10}", s.n1_flux_integral);
    // antibunching: the emitter is empty right after a click
    for tau in [0.0, 0.25, 0.5, 1.0, 2.0] {
        println!("G2(4, 4 + {tau}) = {:.6}", correlator_gm(&ev, 0, &[4.0, 4.0 + tau])?);
    }
    Ok(())
}
