//! Guessing probabilities and min-entropies by decomposition search.
//!
//! For pure states the answer is exact. For mixed states the search only
//! ever finds valid decompositions, so `G` comes out as a lower bound and the
//! entropies as upper bounds; for qubits they agree with the closed form.

use collapse_rng::oracle::{
    decompositions_of, guessing_probability, hmin_asy_classical, hmin_classical, random_state,
};
use collapse_rng::quantum::{shannon_entropy, outcome_distribution, DensityMatrix, Measurement};

fn main() -> collapse_rng::Result<()> {
    let z = Measurement::sigma_z();
    let states = [
        ("|+>", DensityMatrix::plus()),
        ("|0>", DensityMatrix::zero()),
        ("I/2", DensityMatrix::maximally_mixed(2)?),
        ("bloch (0.6, 0, 0.3)", DensityMatrix::from_bloch([0.6, 0.0, 0.3])?),
        ("random rank 2", random_state(2, 2, 5)?),
    ];
    println!("{:<20} {:>10} {:>10} {:>10} {:>10} {:>10}", "state", "G", "closed", "H_min", "H_asy", "H(p)");
    for (name, rho) in &states {
        let g = guessing_probability(rho, &z, 2000, 1)?;
        let [x, y, _] = rho.bloch()?;
        let closed = 0.5 * (1.0 + (1.0 - x * x - y * y).sqrt());
        let h = hmin_classical(rho, &z, 2000, 1)?;
        let asy = hmin_asy_classical(rho, &z, 2000, 1)?;
        let shannon = shannon_entropy(&outcome_distribution(&z, rho)?);
        println!(
            "{name:<20} {:>10.6} {closed:>10.6} {:>10.6} {:>10.6} {shannon:>10.6}   ({:?})",
            g.value, h.value, asy.value, g.bias
        );
    }

    let rho = random_state(3, 3, 8)?;
    let decs = decompositions_of(&rho, 200, 3)?;
    let worst = decs
        .iter()
        .map(|d| d.reconstruct().max_abs_diff(rho.op()))
        .fold(0.0, f64::max);
    println!("qutrit: {} decompositions, worst reconstruction error {worst:.2e}", decs.len());
    let g3 = guessing_probability(&rho, &Measurement::computational(3)?, 5000, 3)?;
    println!("qutrit G >= {:.6}", g3.value);
    Ok(())
}
