// Certainty against a thermal reference as xi -> 1: S_H tends to 2, so
// NC_H tends to C_H + 2.

use num_complex::Complex64;

use coherence_lab::infinite::{certainty_limit_sweep_populations, default_xi_grid, fock_report};
use coherence_lab::states::{sg_phase_state, TruncationConfig};
use coherence_lab::Result;

pub fn main() -> Result<()> {
    let grid = default_xi_grid();
    let number_state = [0.0, 0.0, 0.0, 1.0];
    let sweep = certainty_limit_sweep_populations(&number_state, 0.0, &grid)?;
    for p in &sweep.points {
        println!("|3>  xi = {:.6}: S_H = {:.8}", p.xi, p.s_h);
    }
    println!("|3>  extrapolated NC_H = {:.8}", sweep.nc_h_limit);

    let t = sg_phase_state(Complex64::new(0.5, 0.0), &TruncationConfig::default())?;
    let r = fock_report(&t)?;
    println!("phase state xi=0.5: C_H = {:.8}, NC_H -> {:.8} (dim {})", r.c_h, r.nc_h, r.dim);
    Ok(())
}
