// Coherence versus squeeze fraction at fixed energy, written as CSV.

use coherence_lab::figures::{argmax, coherence_curve, figure, FigureId, FigureOptions};
use coherence_lab::Result;

pub fn main() -> Result<()> {
    let opts = FigureOptions::default().with_sets(&["nbar=30", "f=0:1:0.05"])?;
    let table = figure(FigureId::Fig6, &opts)?;
    let path = std::env::temp_dir().join("coherence_lab_fig6.csv");
    table.write_csv(std::fs::File::create(&path)?)?;
    if let Some((f, c)) = argmax(&coherence_curve(&table, &[(0, 30.0)], 1)) {
        println!("nbar=30: largest C_H = {c:.4} at squeeze fraction {f:.2}");
    }
    println!("{} rows written to {}", table.rows.len(), path.display());
    Ok(())
}
