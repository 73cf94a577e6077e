//! Property tests for the invariants the certification pipeline relies on.

use collapse_rng::certifier::{
    adjust_disturbance, bound_theorem1, bound_theorem2, bound_theorem3, bound_theorem5, certify,
    modified_disturbance, CertInput, NoiseParams, TrustLevel, DOMAIN_TOL,
};
use collapse_rng::oracle::{
    decompositions_of, guessing_probability, hmin_asy_classical, random_measurement,
    random_state,
};
use collapse_rng::protocol::{binomial, run_protocol, seed_cost, InstrumentSpec, Scenario, TestMeasurementSpec};
use collapse_rng::quantum::{
    kl_divergence, lueders_channel, outcome_distribution, realized_instrument, shannon_entropy,
    trace_distance, tv_distance, CMatrix, DensityMatrix, Distribution, Measurement, MeasurementKind,
};
use num_bigint::BigUint;
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn state(dim: usize, seed: u64) -> DensityMatrix {
    random_state(dim, 1 + (seed as usize) % dim, seed).unwrap()
}

fn povm(dim: usize, seed: u64) -> Measurement {
    random_measurement(dim, 2 + (seed as usize) % 3, MeasurementKind::GeneralPovm, seed).unwrap()
}

fn von_neumann(seed: u64) -> Measurement {
    random_measurement(2, 2, MeasurementKind::RankOneProjective, seed).unwrap()
}

fn distribution() -> impl Strategy<Value = Distribution> {
    prop::collection::vec(0.0f64..1.0, 2..6).prop_filter_map("nonzero mass", |w| {
        let total: f64 = w.iter().sum();
        (total > 1e-6).then(|| Distribution::new(w.iter().map(|x| x / total).collect()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn trace_distance_is_a_metric(dim in 2usize..=4, s in any::<u64>()) {
        let (a, b, c) = (state(dim, s), state(dim, s ^ 1), state(dim, s ^ 2));
        let ab = trace_distance(&a, &b).unwrap();
        prop_assert!(trace_distance(&a, &a).unwrap().abs() < TOL);
        prop_assert!((ab - trace_distance(&b, &a).unwrap()).abs() < TOL);
        prop_assert!((0.0..=1.0 + TOL).contains(&ab));
        prop_assert!(ab <= trace_distance(&a, &c).unwrap() + trace_distance(&c, &b).unwrap() + TOL);
    }

    #[test]
    fn disturbance_is_below_state_change(dim in 2usize..=4, s in any::<u64>()) {
        let rho = state(dim, s);
        let a = povm(dim, s ^ 3);
        let b = povm(dim, s ^ 4);
        let post = lueders_channel(&a, &rho).unwrap();
        let d_ab = tv_distance(&outcome_distribution(&b, &rho).unwrap(), &outcome_distribution(&b, &post).unwrap()).unwrap();
        prop_assert!(d_ab <= trace_distance(&rho, &post).unwrap() + TOL);
    }

    #[test]
    fn kl_is_nonnegative(q in distribution(), s in any::<u64>()) {
        let n = q.len();
        let w: Vec<f64> = (0..n).map(|k| 1.0 + ((s >> (8 * k)) & 0xff) as f64).collect();
        let total: f64 = w.iter().sum();
        let q2 = Distribution::new(w.iter().map(|x| x / total).collect()).unwrap();
        prop_assert!(kl_divergence(&q, &q2).unwrap() >= -TOL);
        prop_assert!(kl_divergence(&q, &q).unwrap().abs() < TOL);
    }

    #[test]
    fn bounds_increase_with_disturbance(x in 0.0f64..=0.5, y in 0.0f64..=0.5) {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        for f in [bound_theorem1, bound_theorem2, bound_theorem3, bound_theorem5] {
            prop_assert!(f(lo).unwrap().bits <= f(hi).unwrap().bits + TOL);
        }
        let (t1, t2) = (bound_theorem1(hi).unwrap().bits, bound_theorem2(hi).unwrap().bits);
        prop_assert!(t1 <= t2 + TOL);
        prop_assert!(t2 <= bound_theorem5(hi).unwrap().bits + TOL);
        for f in [bound_theorem1, bound_theorem2, bound_theorem3, bound_theorem5] {
            let b = f(hi).unwrap().bits;
            prop_assert!((0.0..=1.0 + TOL).contains(&b));
        }
    }

    #[test]
    fn overshoot_past_domain_is_rejected(excess in 1e-8f64..1.0) {
        prop_assert!(bound_theorem2(0.5 + excess).is_err());
        prop_assert!(bound_theorem3(0.5 + excess).is_err());
        prop_assert!(bound_theorem1(0.5f64.sqrt() + excess).is_err());
        prop_assert!(bound_theorem2(0.5 + DOMAIN_TOL / 2.0).is_ok());
    }

    #[test]
    fn noise_never_increases_certified_bits(s in any::<u64>(), ea in 0.0f64..0.2, eb in 0.0f64..0.1) {
        let rho = state(2, s);
        let (a, b) = (von_neumann(s ^ 5), von_neumann(s ^ 6));
        let p = outcome_distribution(&a, &rho).unwrap();
        let q = outcome_distribution(&b, &rho).unwrap();
        let qp = outcome_distribution(&b, &lueders_channel(&a, &rho).unwrap()).unwrap();
        let d = tv_distance(&q, &qp).unwrap();
        let level = TrustLevel::trusted_pair(&a, &b).unwrap();
        let input = CertInput::new(q, qp, d);
        let clean = certify(&input, &level, NoiseParams::none(), Some(&p)).unwrap();
        let noisy = certify(&input, &level, NoiseParams::new(ea, eb).unwrap(), Some(&p)).unwrap();
        for (x, y) in noisy.bounds.iter().zip(&clean.bounds) {
            prop_assert_eq!(x.theorem, y.theorem);
            prop_assert!(x.bits <= y.bits + TOL, "{} {} > {}", x.theorem, x.bits, y.bits);
        }
    }

    #[test]
    fn adjustment_is_monotone(d in 0.0f64..1.0, e1 in 0.0f64..0.5, e2 in 0.0f64..0.5, eb in 0.0f64..0.2) {
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        for level in [TrustLevel::UntrustedPovm, TrustLevel::trusted_pair(&Measurement::sigma_z(), &Measurement::sigma_x()).unwrap()] {
            let a = adjust_disturbance(d, NoiseParams::new(lo, eb).unwrap(), &level);
            let b = adjust_disturbance(d, NoiseParams::new(hi, eb).unwrap(), &level);
            prop_assert!(b <= a && a <= d && b >= 0.0);
        }
    }

    #[test]
    fn modified_disturbance_scales_linearly(d in 0.0f64..0.5, delta in 0.1f64..1.5) {
        let tau = modified_disturbance(d, delta).unwrap();
        prop_assert!((tau * delta - std::f64::consts::SQRT_2 * d).abs() < TOL);
    }

    #[test]
    fn seed_cost_matches_machine_binomial(n in 2u64..60, k in 1u64..60) {
        prop_assume!(k < n);
        let mut c: u128 = 1;
        for i in 0..k as u128 {
            c = c * (n as u128 - i) / (i + 1);
        }
        prop_assert_eq!(binomial(n, k), BigUint::from(c));
        let bits = 128 - (c - 1).leading_zeros() as u64;
        prop_assert_eq!(seed_cost(n, k).unwrap().t_bits, bits);
    }

    #[test]
    fn identity_corrections_reproduce_lueders(dim in 2usize..=4, s in any::<u64>()) {
        let rho = state(dim, s);
        let a = povm(dim, s ^ 7);
        let eye = vec![CMatrix::identity(dim); a.outcomes()];
        let real = realized_instrument(&a, &eye, &rho).unwrap();
        prop_assert!(real.op().max_abs_diff(lueders_channel(&a, &rho).unwrap().op()) < 1e-12);
    }

    #[test]
    fn decompositions_reconstruct(dim in 2usize..=4, s in any::<u64>()) {
        let rho = state(dim, s);
        for d in decompositions_of(&rho, 12, s).unwrap() {
            prop_assert!(d.reconstruct().max_abs_diff(rho.op()) < 1e-10);
        }
    }

    #[test]
    fn asymptotic_oracle_is_below_shannon(dim in 2usize..=4, s in any::<u64>()) {
        let rho = state(dim, s);
        let a = Measurement::computational(dim).unwrap();
        let h = shannon_entropy(&outcome_distribution(&a, &rho).unwrap());
        prop_assert!(hmin_asy_classical(&rho, &a, 16, s).unwrap().value <= h + TOL);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn protocol_counts_are_consistent(s in any::<u64>(), n in 20u64..3000) {
        let n_u = 1 + s % (n - 1);
        let rho = state(2, s);
        let scenario = Scenario::new(
            rho.clone(),
            InstrumentSpec::ideal(von_neumann(s ^ 8)),
            TestMeasurementSpec::ideal(von_neumann(s ^ 9)),
            n,
            n_u,
            s,
        ).unwrap();
        let stats = run_protocol(&scenario).unwrap();
        prop_assert_eq!(stats.counts_q.iter().sum::<u64>(), n_u);
        prop_assert_eq!(stats.counts_q_prime.iter().sum::<u64>(), n - n_u);
        prop_assert_eq!(stats.raw_outcomes_a.len() as u64, n - n_u);
        let tv = tv_distance(&stats.q_hat, &stats.q_prime_hat).unwrap();
        prop_assert!((stats.d_hat - tv).abs() < 1e-15);
    }

    #[test]
    fn eigenstates_give_constant_outcomes(k in 0usize..2, s in any::<u64>(), n in 20u64..3000) {
        let scenario = Scenario::new(
            DensityMatrix::basis_state(2, k).unwrap(),
            InstrumentSpec::ideal(Measurement::sigma_z()),
            TestMeasurementSpec::ideal(von_neumann(s)),
            n,
            n / 2,
            s,
        ).unwrap();
        let stats = run_protocol(&scenario).unwrap();
        prop_assert!(stats.raw_outcomes_a.iter().all(|&x| x as usize == k));
        let (_, _, d) = collapse_rng::protocol::analytic_statistics(&scenario).unwrap();
        prop_assert!(d.abs() < 1e-12);
    }

    #[test]
    fn guessing_probability_grows_with_budget(s in any::<u64>(), small in 1usize..20, extra in 0usize..40) {
        let rho = state(3, s);
        let a = Measurement::computational(3).unwrap();
        let lo = guessing_probability(&rho, &a, small, s).unwrap().value;
        let hi = guessing_probability(&rho, &a, small + extra, s).unwrap().value;
        prop_assert!(lo <= hi + 1e-12);
        prop_assert!(hi >= outcome_distribution(&a, &rho).unwrap().max() - 1e-12);
    }

    #[test]
    fn qubit_guessing_probability_is_exact(s in any::<u64>()) {
        let rho = random_state(2, 2, s).unwrap();
        let [x, y, _] = rho.bloch().unwrap();
        let exact = 0.5 * (1.0 + (1.0 - x * x - y * y).sqrt());
        let g = guessing_probability(&rho, &Measurement::sigma_z(), 10_000, s).unwrap().value;
        prop_assert!(g <= exact + 1e-12 && g >= exact - 1e-3, "{} vs {}", g, exact);
    }
}
