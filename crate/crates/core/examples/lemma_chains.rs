//! Checks the four disturbance inequality chains, the bound orderings and
//! certification soundness on random instances.
//!
//! ```text
//! cargo run --release --example lemma_chains -- [instances] [seed]
//! ```

use collapse_rng::oracle::{check_bound_orderings, check_soundness, verify_lemma_chains};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let instances: usize = args.next().map_or(Ok(10_000), |s| s.parse())?;
    let seed: u64 = args.next().map_or(Ok(2024), |s| s.parse())?;

    let report = verify_lemma_chains(instances, &[2, 3, 4], seed)?;
    for chain in &report.chains {
        println!("chain ({})", chain.chain.label());
        for link in &chain.links {
            println!("  {link}");
        }
    }

    println!("bound orderings");
    for link in check_bound_orderings(instances, seed)? {
        println!("  {link}");
    }

    println!("soundness (pure qubit states)");
    for (_, link) in check_soundness(instances, seed)? {
        println!("  {link}");
    }
    println!("total chain violations: {}", report.violations());
    Ok(())
}
