// Nonclassicality splits into coherence plus certainty for random states.

use coherence_lab::density::maximally_mixed;
use coherence_lab::quantifiers::Evaluator;
use coherence_lab::random::{rng_for, sample, SampleKind};
use coherence_lab::Result;

pub fn main() -> Result<()> {
    let eval = Evaluator::checked();
    for n in [2, 3, 8] {
        for kind in SampleKind::ALL {
            let rho = sample(&mut rng_for(7, n, 0), kind, n)?;
            let h = eval.pythagoras(&rho, &maximally_mixed(n)?)?;
            let hs = eval.hs_quantifiers(&rho)?;
            println!(
                "N={n} {kind:?}: {:.6} = {:.6} + {:.6} (residual {:.1e}, hilbert-schmidt {:.1e})",
                h.hypotenuse, h.coherence_leg, h.certainty_leg, h.residual, hs.residual
            );
        }
    }
    Ok(())
}
