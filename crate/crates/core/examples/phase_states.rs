// Phase states reach the coherence maximum N - 1; basis states reach the
// certainty maximum. Pure states saturate the duality inequality.

use coherence_lab::density::DEFAULT_BASIS;
use coherence_lab::quantifiers::duality_gap;
use coherence_lab::states::finite_phase_state;
use coherence_lab::{PureState, QuantifierReport, Result};

pub fn main() -> Result<()> {
    for n in [2, 4, 16] {
        let phase = finite_phase_state(n, &[])?.to_density();
        let mut e0 = vec![0.0; n];
        e0[0] = 1.0;
        let basis = PureState::from_real(&e0, DEFAULT_BASIS)?.to_density();
        let p = QuantifierReport::from_density(&phase)?;
        let b = QuantifierReport::from_density(&basis)?;
        println!(
            "N={n}: phase C_H = {:.6}, basis S_H = {:.6} (max {:.6}), duality gaps {:.1e} {:.1e}",
            p.c_h,
            b.s_h,
            2.0 * (1.0 - 1.0 / (n as f64).sqrt()),
            duality_gap(&phase)?,
            duality_gap(&basis)?
        );
    }
    Ok(())
}
