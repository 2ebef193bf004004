//! Idler/signal pair correlations of the three-level cascade.

use photonforge::dynamics::LadderRates;
use photonforge::scenarios::{default_sweep_axes, run_cascade, sweep_cascade, CascadeConfig};

fn main() -> photonforge::Result<()> {
    let base = CascadeConfig::new(LadderRates::transmon(), 5.0);
    let r = run_cascade(&base)?;
    println!("G_ii = {:.4}  G_ss = {:.4}  G_is = {:.4}  V = {:.4}", r.g_ii, r.g_ss, r.g_is, r.v);

    let (alphas, gammas) = default_sweep_axes();
    let rows = sweep_cascade(&base, &alphas, &gammas)?;
    print!("alpha_d \\ gamma02");
    for g in &gammas {
        print!("{g:>9.4}");
    }
    println!();
    for chunk in rows.chunks(gammas.len()) {
        print!("{:>17.2}", chunk[0].alpha_d);
        for row in chunk {
            print!("{:>9.4}", row.result.v);
        }
        println!();
    }
    Ok(())
}
