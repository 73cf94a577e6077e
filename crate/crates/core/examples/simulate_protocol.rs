//! Monte Carlo runs of the protocol with a growing number of particles.
//!
//! The empirical disturbance concentrates on the exact value at rate
//! `1/√min(n_u, n − n_u)`; the table shows the error against that scale.

use collapse_rng::protocol::{
    analytic_statistics, default_upper_count, run_protocol, InstrumentSpec, Scenario,
    TestMeasurementSpec,
};
use collapse_rng::quantum::{DensityMatrix, Measurement};

fn main() -> collapse_rng::Result<()> {
    let rho = DensityMatrix::from_bloch([0.8, 0.1, 0.3])?;
    let a = InstrumentSpec::ideal(Measurement::sigma_z());
    let b = TestMeasurementSpec::ideal(Measurement::qubit_angle(1.2));

    println!("{:>9} {:>6} {:>10} {:>10} {:>10}", "n", "n_u", "d_hat", "error", "5/sqrt(m)");
    for exp in 3..=6 {
        let n = 10u64.pow(exp);
        let n_u = default_upper_count(n);
        let s = Scenario::new(rho.clone(), a.clone(), b.clone(), n, n_u, 42)?;
        let (_, _, d) = analytic_statistics(&s)?;
        let stats = run_protocol(&s)?;
        let scale = 5.0 / (n_u.min(n - n_u) as f64).sqrt();
        println!(
            "{n:>9} {n_u:>6} {:>10.6} {:>10.6} {:>10.6}",
            stats.d_hat,
            (stats.d_hat - d).abs(),
            scale
        );
        if exp == 6 {
            println!("exact disturbance {d:.6}");
            let ones = stats.raw_outcomes_a.iter().filter(|&&x| x == 1).count();
            println!("raw A outcomes: {} symbols, {} ones", stats.raw_outcomes_a.len(), ones);
        }
    }
    Ok(())
}
