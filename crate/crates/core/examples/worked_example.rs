//! The basic scenario: prepare `|+⟩`, generate with σz, test with σx.
//!
//! Prints every quantity in the pipeline, from outcome statistics to the
//! certified bounds, then repeats it for the maximally mixed state, which
//! yields no certified randomness at all.

use collapse_rng::certifier::{certify, CertInput, NoiseParams, TrustLevel};
use collapse_rng::oracle::hmin_classical;
use collapse_rng::quantum::{
    collision_uncertainty, lueders_channel, outcome_distribution, overlap_factor, overlap_matrix,
    trace_distance, tv_distance, DensityMatrix, Measurement,
};

fn run(label: &str, rho: &DensityMatrix) -> collapse_rng::Result<()> {
    let a = Measurement::sigma_z();
    let b = Measurement::sigma_x();

    let p = outcome_distribution(&a, rho)?;
    let post = lueders_channel(&a, rho)?;
    let q = outcome_distribution(&b, rho)?;
    let q_prime = outcome_distribution(&b, &post)?;
    let d = tv_distance(&q, &q_prime)?;
    let delta_ab = overlap_factor(&overlap_matrix(&a, &b)?);

    println!("== {label}");
    println!("p  = {:?}", p.probs());
    println!("q  = {:?}   q' = {:?}", q.probs(), q_prime.probs());
    println!("collision uncertainty  {:.6}", collision_uncertainty(&p));
    println!("state change D(rho, rho')  {:.6}", trace_distance(rho, &post)?);
    println!("disturbance D(A->B)  {d:.6}   overlap factor {delta_ab:.6}");

    let level = TrustLevel::trusted_pair(&a, &b)?;
    let report = certify(&CertInput::new(q, q_prime, d), &level, NoiseParams::none(), Some(&p))?;
    for bound in &report.bounds {
        let tau = bound.tau.map(|t| format!("  tau {t:.6}")).unwrap_or_default();
        println!("  {:<9} {:.6} bits{tau}", bound.theorem.label(), bound.bits);
    }
    println!("  best {:.6} bits via {}", report.best.bits, report.best.theorem);
    println!("  exact H_min = {:.6}", hmin_classical(rho, &a, 1000, 0)?.value);
    Ok(())
}

fn main() -> collapse_rng::Result<()> {
    run("|+><+|", &DensityMatrix::plus())?;
    run("I/2", &DensityMatrix::maximally_mixed(2)?)
}
