// Runs the property suites with a small sample count.

use coherence_lab::verify::{run, Suite, VerifyConfig};
use coherence_lab::Result;

pub fn main() -> Result<()> {
    let report = run(&VerifyConfig {
        suite: Suite::Bounds,
        trials: 50,
        ..VerifyConfig::default()
    });
    println!("{report}");
    Ok(())
}
