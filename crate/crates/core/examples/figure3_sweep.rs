//! Asymptotic bound `KL(q‖q')` against the uncertainty-relation baseline
//! for qubit bases with overlap `c = 0.62`.
//!
//! For each B-statistics `q`, the divergence is minimized and maximized over
//! all qubit states producing `q`; the worst case still beats the baseline.

use collapse_rng::certifier::{figure3_exact, figure3_grid, sweep_figure3};

fn main() -> collapse_rng::Result<()> {
    let c = 0.62;
    let grid = figure3_grid(20)?;
    let rows = sweep_figure3(c, &grid, 1000)?;
    println!("{:>6} {:>10} {:>10} {:>10} {:>12}", "q0", "baseline", "KL min", "KL max", "exact min");
    for (row, q) in rows.iter().zip(&grid) {
        let (lo, _) = figure3_exact(c, q)?;
        println!(
            "{:>6.2} {:>10.6} {:>10.6} {:>10.6} {:>12.6}",
            row.q0, row.baseline, row.kl_min, row.kl_max, lo
        );
    }
    let worst = rows.iter().map(|r| r.kl_min - r.baseline).fold(f64::INFINITY, f64::min);
    println!("smallest gap min KL - baseline: {worst:.6}");
    Ok(())
}
