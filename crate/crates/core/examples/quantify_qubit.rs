// Coherence, certainty and nonclassicality of a few qubit states.

use coherence_lab::quantifiers::qubit_closed_forms;
use coherence_lab::states::qubit_from_bloch;
use coherence_lab::{QuantifierReport, Result};

pub fn main() -> Result<()> {
    for s in [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.3, 0.4, 0.5]] {
        let r = QuantifierReport::from_density(&qubit_from_bloch(s)?)?;
        let cf = qubit_closed_forms(s)?;
        println!(
            "s = {s:?}: C_H = {:.6} (closed form {:.6}), S_H = {:.6}, NC_H = {:.6}",
            r.c_h, cf.c_h, r.s_h, r.nc_h
        );
    }
    Ok(())
}
