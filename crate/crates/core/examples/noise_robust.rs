//! Certification with an imperfect generating measurement and test.
//!
//! A is followed by 2% depolarizing noise; B's real effects are slightly
//! biased. Declared noise levels are checked against sampled lower bounds
//! and subtracted from the disturbance before certifying.

use collapse_rng::certifier::{adjust_disturbance, certify, CertInput, NoiseParams, TrustLevel};
use collapse_rng::protocol::{
    analytic_statistics, empirical_epsilons, run_protocol, InstrumentSpec, Scenario,
    TestMeasurementSpec,
};
use collapse_rng::quantum::{DensityMatrix, Measurement};

fn main() -> collapse_rng::Result<()> {
    let a = InstrumentSpec::depolarizing(Measurement::sigma_z(), 0.02)?;
    let sx = Measurement::sigma_x();
    // real effects: mix 1% of the swapped projectors into each outcome
    let e = sx.effects();
    let real = vec![
        &e[0].scale_real(0.99) + &e[1].scale_real(0.01),
        &e[1].scale_real(0.99) + &e[0].scale_real(0.01),
    ];
    let b = TestMeasurementSpec::new(sx.clone(), Some(real), 0.01)?;

    let (eps_a, eps_b) = empirical_epsilons(&a, &b, 10_000, 7)?;
    println!("declared eps_A = {}, sampled max {eps_a:.6}", a.epsilon_a());
    println!("declared eps_B = {}, sampled max {eps_b:.6}", b.epsilon_b());

    let s = Scenario::new(DensityMatrix::plus(), a, b, 1_000_000, 1000, 11)?;
    let stats = run_protocol(&s)?;
    let (_, _, d) = analytic_statistics(&s)?;
    println!("d_hat = {:.6}, exact with ideal B = {d:.6}", stats.d_hat);

    let level = TrustLevel::trusted_pair(&Measurement::sigma_z(), &sx)?;
    let noise = NoiseParams::new(s.instrument_a.epsilon_a(), s.test_b.epsilon_b())?;
    println!("adjusted disturbance {:.6}", adjust_disturbance(stats.d_hat, noise, &level));
    let noisy = certify(&CertInput::from(&stats), &level, noise, None)?;
    let clean = certify(&CertInput::from(&stats), &level, NoiseParams::none(), None)?;
    println!("{:<9} {:>10} {:>10}", "bound", "with eps", "no eps");
    for (x, y) in noisy.bounds.iter().zip(&clean.bounds) {
        println!("{:<9} {:>10.6} {:>10.6}", x.theorem.label(), x.bits, y.bits);
    }

    // declared noise larger than the signal clamps the disturbance to zero
    let big = NoiseParams::new(0.6, 0.0)?;
    println!("eps_A = 0.6: adjusted {}", adjust_disturbance(stats.d_hat, big, &TrustLevel::UntrustedPovm));
    Ok(())
}
