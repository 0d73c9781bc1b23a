// Displaced number states D(alpha)|n0>.

use num_complex::Complex64;

use coherence_lab::states::{displaced_number_state, TruncationConfig};
use coherence_lab::{QuantifierReport, Result};

pub fn main() -> Result<()> {
    let trunc = TruncationConfig::default();
    for n0 in [0, 1, 4] {
        let line: Vec<String> = [0.5, 1.0, 2.0, 4.0]
            .iter()
            .map(|&a| {
                let t = displaced_number_state(Complex64::new(a, 0.0), n0, &trunc)?;
                Ok(format!("{:.3}", QuantifierReport::from_pure(&t.state).c_h))
            })
            .collect::<Result<_>>()?;
        println!("n0={n0}: C_H at alpha = 0.5, 1, 2, 4 -> {}", line.join(", "));
    }
    Ok(())
}
