use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Quantum randomness consumed by the path switch.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedLedger {
    /// `⌈log2 C(n, n_u)⌉`
    pub t_bits: u64,
    /// `t_bits / (n − n_u)`
    pub per_run_cost: f64,
    /// `√n · log2 √n`, the cost when `n_u = ⌈√n⌉`.
    pub asymptotic_estimate: f64,
}

/// Product of `lo..=hi` by balanced splitting.
fn range_product(lo: u64, hi: u64) -> BigUint {
    if lo > hi {
        return BigUint::from(1u8);
    }
    if hi - lo < 16 {
        return (lo..=hi).fold(BigUint::from(1u8), |acc, k| acc * k);
    }
    let mid = lo + (hi - lo) / 2;
    range_product(lo, mid) * range_product(mid + 1, hi)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u8);
    }
    let k = k.min(n - k);
    range_product(n - k + 1, n) / range_product(1, k)
}

pub fn seed_cost(n: u64, n_u: u64) -> Result<SeedLedger> {
    if n_u == 0 || n_u >= n {
        return Err(Error::InvalidArgument(format!(
            "need 0 < n_u < n, got n = {n}, n_u = {n_u}"
        )));
    }
    // ⌈log2 C⌉ is the bit length of C − 1 for C ≥ 1
    let c = binomial(n, n_u);
    let t_bits = (c - 1u8).bits();
    let root = (n as f64).sqrt();
    Ok(SeedLedger {
        t_bits,
        per_run_cost: t_bits as f64 / (n - n_u) as f64,
        asymptotic_estimate: root * root.log2(),
    })
}

/// `⌈√n⌉`, the suggested upper-path count.
pub fn default_upper_count(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(4, 2), BigUint::from(6u8));
        assert_eq!(binomial(52, 5), BigUint::from(2_598_960u32));
        assert_eq!(binomial(3, 5), BigUint::from(0u8));
        assert_eq!(seed_cost(4, 2).unwrap().t_bits, 3);
        // C(8, 4) = 70 → 7 bits; C(4, 1) = 4 → exactly 2 bits
        assert_eq!(seed_cost(8, 4).unwrap().t_bits, 7);
        assert_eq!(seed_cost(4, 1).unwrap().t_bits, 2);
    }

    #[test]
    fn invalid_counts() {
        assert!(seed_cost(5, 5).is_err());
        assert!(seed_cost(5, 0).is_err());
        assert!(seed_cost(5, 7).is_err());
    }

    #[test]
    fn large_run_is_cheap() {
        let l = seed_cost(1_000_000, 1000).unwrap();
        assert_eq!(l.t_bits, 11402);
        assert!((l.per_run_cost - 0.011413).abs() < 1e-6);
        assert!(l.per_run_cost < 0.02);
    }

    #[test]
    fn ceil_sqrt() {
        for (n, r) in [(1, 1), (2, 2), (4, 2), (5, 3), (100, 10), (101, 11), (1_000_000, 1000)] {
            assert_eq!(default_upper_count(n), r);
        }
    }
}
