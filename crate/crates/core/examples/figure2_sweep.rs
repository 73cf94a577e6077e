//! Single-shot bounds as functions of the disturbance for a qubit pair with
//! `|⟨0|b_0⟩|² = 0.75`. Blank cells lie outside a bound's domain.

use collapse_rng::certifier::{figure2_grid, sweep_figure2, theorem3_edge};

fn main() -> collapse_rng::Result<()> {
    let c00 = 0.75;
    let cell = |x: Option<f64>| x.map_or_else(|| format!("{:>9}", "-"), |v| format!("{v:>9.6}"));
    println!("{:>9} {:>9} {:>9} {:>9}", "d", "T1", "T2", "T3");
    for row in sweep_figure2(c00, &figure2_grid(c00, 20)?)? {
        println!("{:>9.6} {} {} {}", row.d, cell(row.thm1), cell(row.thm2), cell(row.thm3));
    }
    println!("T3 reaches one bit at d = {:.6}", theorem3_edge(c00)?);
    Ok(())
}
