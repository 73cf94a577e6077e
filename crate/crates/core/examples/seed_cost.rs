//! Quantum randomness spent on choosing paths, `⌈log2 C(n, n_u)⌉` bits,
//! per generated raw bit, for `n_u = ⌈√n⌉`.

use collapse_rng::protocol::{default_upper_count, seed_cost};

fn main() -> collapse_rng::Result<()> {
    println!("{:>9} {:>6} {:>8} {:>12} {:>12}", "n", "n_u", "t bits", "per run", "sqrt-n est.");
    for exp in 2..=6 {
        let n = 10u64.pow(exp);
        let n_u = default_upper_count(n);
        let l = seed_cost(n, n_u)?;
        println!(
            "{n:>9} {n_u:>6} {:>8} {:>12.6} {:>12.1}",
            l.t_bits, l.per_run_cost, l.asymptotic_estimate
        );
    }
    println!("C(4, 2) = 6 needs {} bits", seed_cost(4, 2)?.t_bits);
    Ok(())
}
