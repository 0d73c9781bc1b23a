// Squeezed coherent states built two ways, with the broad-Gaussian
// coherence estimate.

use coherence_lab::infinite::gaussian_coherence_estimate;
use coherence_lab::states::{
    squeezed_coherent_number_stats, squeezed_coherent_state_with, Construction, TruncationConfig,
};
use coherence_lab::{QuantifierReport, Result};

pub fn main() -> Result<()> {
    let trunc = TruncationConfig::default();
    for (big_r, r) in [(2.0, 0.0), (2.0, 0.5), (8.0, 0.3), (10.0, 0.5)] {
        let cf = squeezed_coherent_state_with(big_r, r, &trunc, Construction::ClosedForm)?;
        let op = squeezed_coherent_state_with(big_r, r, &TruncationConfig::with_dim(cf.state.dim()), Construction::Operator)?;
        let gap = op
            .state
            .amplitudes()
            .iter()
            .zip(cf.state.amplitudes().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let (mean, var) = squeezed_coherent_number_stats(big_r, r);
        println!(
            "R={big_r} r={r}: dim {}, C_H = {:.4}, gaussian {:.4}, mean n {mean:.3}, routes differ by {gap:.1e}",
            cf.state.dim(),
            QuantifierReport::from_pure(&cf.state).c_h,
            gaussian_coherence_estimate(var)?
        );
    }
    Ok(())
}
