//! Why the Lüders assumption matters: realizations `ρ ↦ Σ U_i √M_i ρ √M_i U_i†`
//! can fake or hide disturbance.

use collapse_rng::oracle::adversarial_realization_demo;

fn main() -> collapse_rng::Result<()> {
    let report = adversarial_realization_demo(7, 5000)?;
    println!("{}\n", report.flip);
    println!("U = {{I, I}} differs from Lueders by {:.2e}\n", report.identity_deviation);
    println!("{}", report.chain_breaker);
    println!("  breaks delta_A >= D: {}\n", report.chain_breaker.breaks_chain());
    println!("{}", report.unsound);
    for (i, u) in report.unsound.unitaries.iter().enumerate() {
        println!("  U_{i} = {u:?}");
    }
    Ok(())
}
