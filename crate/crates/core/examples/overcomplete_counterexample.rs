// Replacing the diagonal part by a phase-basis mixture breaks the
// Pythagorean split.

use coherence_lab::overcomplete::{orthogonality_violation, PhaseBasisConfig, RootNormalization};
use coherence_lab::states::qubit_from_bloch;
use coherence_lab::Result;

pub fn main() -> Result<()> {
    for norm in [RootNormalization::Consistent, RootNormalization::Printed] {
        let cfg = PhaseBasisConfig {
            root_normalization: norm,
            ..PhaseBasisConfig::default()
        };
        for s in [[0.5, 0.0, 0.0], [0.0, 0.0, 0.5], [0.0, 0.0, 0.0]] {
            let v = orthogonality_violation(&qubit_from_bloch(s)?, &cfg)?;
            println!(
                "{norm:?} s={s:?}: violation {:.4e}, nodes {}, root defect {:.1e}",
                v.violation, v.nodes, v.root_square_defect
            );
        }
    }
    Ok(())
}
