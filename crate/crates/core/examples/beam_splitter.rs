// Number states through a 50/50 beam splitter, checked against an exact
// binomial expansion, and the coherence dip at the equal split.

use coherence_lab::oracle::{beam_splitter_oracle, canonical_sign, relabel_second_mode};
use coherence_lab::states::{beam_splitter_coefficients, rotated_number_state};
use coherence_lab::{QuantifierReport, Result};

pub fn main() -> Result<()> {
    let mut c = beam_splitter_coefficients(3, 2)?;
    canonical_sign(&mut c);
    let oracle = relabel_second_mode(&beam_splitter_oracle(3, 2)?);
    println!("|3,2> amplitudes: {c:.6?}");
    println!("expansion oracle: {oracle:.6?}");

    let nt = 20;
    for m in [0, nt / 2 - 1, nt / 2, nt / 2 + 1] {
        let psi = rotated_number_state(nt - m, m)?;
        println!("|{}, {m}>: C_H = {:.4}", nt - m, QuantifierReport::from_pure(&psi).c_h);
    }
    Ok(())
}
