//! Builds the atom-in-front-of-a-mirror network from SLH products and prints
//! the resulting coupling and Hamiltonian next to the closed form.

use std::f64::consts::PI;

use photonforge::quantum::C64;
use photonforge::slh::{mirror_closed_form, to_master_equation, SlhTriplet};

fn main() -> photonforge::Result<()> {
    for phi in [0.0, PI / 2.0, 0.9 * PI, PI] {
        let g = SlhTriplet::atom_in_front_of_mirror(1.0, phi, 0.0)?;
        let closed = mirror_closed_form(1.0, phi, 0.0);
        let l = g.couplings()[0].full().matrix()[(0, 1)];
        let gap = g.hamiltonian().max_abs_diff(closed.hamiltonian());
        println!("phi = {:.3}pi  S = {:.4}  L01 = {:.4}  |L01|^2 = {:.4}  H gap = {gap:.1e}", phi / PI, g.scattering()[(0, 0)], l, l.norm_sqr());
    }
    let driven = SlhTriplet::driven_mirror(1.0, 0.0, 0.0, C64::new(5.0, 0.0))?;
    let (h, collapse) = to_master_equation(&driven);
    println!("driven at phi = 0: H = {}  collapse operators: {}", h.matrix(), collapse.len());
    Ok(())
}
