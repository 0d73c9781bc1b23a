// States described as JSON, the input format of `coherence-lab quantify`.

use coherence_lab::states::StateSpec;
use coherence_lab::Result;

pub fn main() -> Result<()> {
    let specs = [
        r#"{"variant": "FinitePhase", "N": 3, "phases": [0, 1, 2]}"#,
        r#"{"variant": "TMSV", "xi": [0.3, 0.4]}"#,
        r#"{"variant": "DisplacedNumber", "alpha": {"re": 1.5, "im": 0}, "n0": 2, "trunc": {"tail_mass_tol": 1e-12}}"#,
    ];
    for text in specs {
        let spec = StateSpec::from_json(text)?;
        let r = spec.report()?;
        println!("{}\n  dim {}, C_H {:.6}, NC_H {:.6}", spec.to_json(), r.dim, r.c_h, r.nc_h);
    }
    Ok(())
}
