use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::instrument::{InstrumentSpec, TestMeasurementSpec};
use crate::error::{Error, Result};
use crate::quantum::matrix::CMatrix;
use crate::quantum::{
    outcome_distribution, sum_conjugations, tv_distance, DensityMatrix, Distribution, Measurement,
};

/// Largest number of outcomes of A that fits the raw output alphabet.
pub const MAX_RAW_OUTCOMES: usize = 256;

const CHUNK: usize = 1 << 16;
const SUBSET_STREAM: u64 = 0;
const TRIAL_STREAM: u64 = 1;
/// ChaCha words consumed per trial (two 64-bit draws).
const WORDS_PER_TRIAL: u128 = 4;

/// One configured run of the prepare-and-measure protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub rho: DensityMatrix,
    pub instrument_a: InstrumentSpec,
    pub test_b: TestMeasurementSpec,
    pub n: u64,
    pub n_u: u64,
    pub seed: u64,
}

impl Scenario {
    pub fn new(
        rho: DensityMatrix,
        instrument_a: InstrumentSpec,
        test_b: TestMeasurementSpec,
        n: u64,
        n_u: u64,
        seed: u64,
    ) -> Result<Self> {
        let s = Scenario {
            rho,
            instrument_a,
            test_b,
            n,
            n_u,
            seed,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_u == 0 || self.n_u >= self.n {
            return Err(Error::InvalidArgument(format!(
                "need 0 < n_u < n, got n = {}, n_u = {}",
                self.n, self.n_u
            )));
        }
        if usize::try_from(self.n).is_err() {
            return Err(Error::InvalidArgument(format!("n = {} is too large", self.n)));
        }
        let dim = self.rho.dim();
        for d in [self.instrument_a.measurement().dim(), self.test_b.measurement().dim()] {
            if d != dim {
                return Err(Error::DimensionMismatch(d, dim));
            }
        }
        if self.instrument_a.measurement().outcomes() > MAX_RAW_OUTCOMES {
            return Err(Error::Unsupported(format!(
                "A has more than {MAX_RAW_OUTCOMES} outcomes"
            )));
        }
        Ok(())
    }

    pub fn n_lower(&self) -> u64 {
        self.n - self.n_u
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalStats {
    pub counts_q: Vec<u64>,
    pub counts_q_prime: Vec<u64>,
    pub q_hat: Distribution,
    pub q_prime_hat: Distribution,
    pub d_hat: f64,
    /// Outcomes of A on the lower path, in trial order.
    pub raw_outcomes_a: Vec<u8>,
}

/// Cumulative sums for inverse-CDF sampling.
fn cumulative(p: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    p.iter()
        .map(|x| {
            acc += x.max(0.0);
            acc
        })
        .collect()
}

fn sample(cdf: &[f64], word: u64) -> usize {
    // 53 high bits to a uniform in [0, 1), scaled by the total mass
    let u = (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64) * cdf[cdf.len() - 1];
    cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1)
}

fn born(effects: &Measurement, op: &CMatrix) -> Vec<f64> {
    effects
        .effects()
        .iter()
        .map(|e| op.trace_product(e).re.max(0.0))
        .collect()
}

/// Distribution of B conditioned on each outcome of A. Outcomes of zero
/// probability get the unconditioned B statistics; they are never drawn.
fn conditional_b(s: &Scenario, measure_b: &Measurement) -> Result<Vec<Vec<f64>>> {
    let branches = s.instrument_a.branch_kraus()?;
    Ok(branches
        .iter()
        .map(|kraus| {
            let out = sum_conjugations(kraus, s.rho.op());
            let mass = out.trace().re;
            if mass > 1e-300 {
                born(measure_b, &out.scale_real(1.0 / mass))
            } else {
                born(measure_b, s.rho.op())
            }
        })
        .collect())
}

/// Marks which trials go to the upper path.
fn upper_path_mask(seed: u64, n: usize, n_u: usize) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(SUBSET_STREAM);
    let mut mask = vec![false; n];
    for i in rand::seq::index::sample(&mut rng, n, n_u) {
        mask[i] = true;
    }
    mask
}

#[derive(Default)]
struct Tally {
    upper: Vec<u64>,
    lower: Vec<u64>,
    raw: Vec<u8>,
}

/// Monte Carlo run of the protocol.
///
/// Trial `k` draws from its own counter position of the seeded generator,
/// so the result does not depend on the thread count.
pub fn run_protocol(s: &Scenario) -> Result<EmpiricalStats> {
    s.validate()?;
    let n = s.n as usize;
    let n_u = s.n_u as usize;
    let measure_b = s.test_b.sampled();
    let outcomes_b = measure_b.outcomes();

    let p_a = outcome_distribution(s.instrument_a.measurement(), &s.rho)?;
    let cdf_a = cumulative(p_a.probs());
    let cdf_upper = cumulative(&born(measure_b, s.rho.op()));
    let cdf_lower: Vec<Vec<f64>> = conditional_b(s, measure_b)?
        .iter()
        .map(|p| cumulative(p))
        .collect();

    let mask = upper_path_mask(s.seed, n, n_u);

    let chunks: Vec<Tally> = mask
        .par_chunks(CHUNK)
        .enumerate()
        .map(|(c, part)| {
            let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
            rng.set_stream(TRIAL_STREAM);
            rng.set_word_pos((c * CHUNK) as u128 * WORDS_PER_TRIAL);
            let mut t = Tally {
                upper: vec![0; outcomes_b],
                lower: vec![0; outcomes_b],
                raw: Vec::new(),
            };
            for &upper in part {
                let w1 = rng.next_u64();
                let w2 = rng.next_u64();
                if upper {
                    t.upper[sample(&cdf_upper, w1)] += 1;
                } else {
                    let a = sample(&cdf_a, w1);
                    t.raw.push(a as u8);
                    t.lower[sample(&cdf_lower[a], w2)] += 1;
                }
            }
            t
        })
        .collect();

    let mut counts_q = vec![0u64; outcomes_b];
    let mut counts_q_prime = vec![0u64; outcomes_b];
    let mut raw_outcomes_a = Vec::with_capacity(n - n_u);
    for t in chunks {
        for j in 0..outcomes_b {
            counts_q[j] += t.upper[j];
            counts_q_prime[j] += t.lower[j];
        }
        raw_outcomes_a.extend(t.raw);
    }
    let q_hat = Distribution::from_counts(&counts_q)?;
    let q_prime_hat = Distribution::from_counts(&counts_q_prime)?;
    let d_hat = tv_distance(&q_hat, &q_prime_hat)?;
    Ok(EmpiricalStats {
        counts_q,
        counts_q_prime,
        q_hat,
        q_prime_hat,
        d_hat,
        raw_outcomes_a,
    })
}

/// Exact `q`, `q'` and disturbance, using the ideal effects of B and the
/// declared realization of A.
pub fn analytic_statistics(s: &Scenario) -> Result<(Distribution, Distribution, f64)> {
    s.validate()?;
    let b = s.test_b.measurement();
    let q = outcome_distribution(b, &s.rho)?;
    let post = s.instrument_a.real_channel(&s.rho)?;
    let q_prime = outcome_distribution(b, &post)?;
    let d = tv_distance(&q, &q_prime)?;
    Ok((q, q_prime, d))
}

/// Random state with a Haar eigenbasis and a uniform-simplex spectrum.
fn spectral_sample<R: Rng + ?Sized>(rng: &mut R, dim: usize, pure: bool) -> Result<DensityMatrix> {
    use crate::oracle::random::{haar_unitary, simplex_weights};
    let spectrum = if pure {
        let mut v = vec![0.0; dim];
        v[0] = 1.0;
        v
    } else {
        simplex_weights(rng, dim)
    };
    let u = haar_unitary(rng, dim);
    DensityMatrix::new(u.conjugate(&CMatrix::from_real_diagonal(&spectrum)).hermitian_part())
}

/// Sampled maxima of the defining expressions of `ε_A` and `ε_B`.
///
/// Half the samples are pure states, half full-rank. The results are lower
/// bounds on the true values.
pub fn empirical_epsilons(
    spec_a: &InstrumentSpec,
    spec_b: &TestMeasurementSpec,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    use crate::oracle::random::stream_rng;
    use crate::quantum::{lueders_channel, trace_distance};

    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let dim = spec_a.measurement().dim();
    if spec_b.measurement().dim() != dim {
        return Err(Error::DimensionMismatch(spec_b.measurement().dim(), dim));
    }
    (0..samples)
        .into_par_iter()
        .map(|k| -> Result<(f64, f64)> {
            let mut rng = stream_rng(seed, k as u64);
            let rho = spectral_sample(&mut rng, dim, k % 2 == 0)?;
            let ideal = lueders_channel(spec_a.measurement(), &rho)?;
            let real = spec_a.real_channel(&rho)?;
            let eps_a = trace_distance(&real, &ideal)?;
            let eps_b = match spec_b.real_effects() {
                None => 0.0,
                Some(re) => {
                    let ideal_b = born(spec_b.measurement(), rho.op());
                    let real_b = born(re, rho.op());
                    0.5 * ideal_b
                        .iter()
                        .zip(&real_b)
                        .map(|(x, y)| (x - y).abs())
                        .sum::<f64>()
                }
            };
            Ok((eps_a, eps_b))
        })
        .try_reduce(|| (0.0, 0.0), |x, y| Ok((x.0.max(y.0), x.1.max(y.1))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(rho: DensityMatrix, a: Measurement, b: Measurement, n: u64, n_u: u64, seed: u64) -> Scenario {
        Scenario::new(rho, InstrumentSpec::ideal(a), TestMeasurementSpec::ideal(b), n, n_u, seed).unwrap()
    }

    #[test]
    fn eigenstate_is_never_disturbed() {
        let s = scenario(DensityMatrix::zero(), Measurement::sigma_z(), Measurement::sigma_z(), 1000, 100, 1);
        let st = run_protocol(&s).unwrap();
        assert_eq!(st.counts_q, vec![100, 0]);
        assert_eq!(st.counts_q_prime, vec![900, 0]);
        assert_eq!(st.d_hat, 0.0);
        assert!(st.raw_outcomes_a.iter().all(|&a| a == 0));
    }

    #[test]
    fn plus_state_disturbance_concentrates() {
        let s = scenario(DensityMatrix::plus(), Measurement::sigma_z(), Measurement::sigma_x(), 1_000_000, 1000, 42);
        let st = run_protocol(&s).unwrap();
        assert!((st.d_hat - 0.5).abs() <= 0.05, "d_hat = {}", st.d_hat);
        assert_eq!(st.counts_q.iter().sum::<u64>(), 1000);
        assert_eq!(st.counts_q_prime.iter().sum::<u64>(), 999_000);
        assert_eq!(st.raw_outcomes_a.len(), 999_000);
        let tv = tv_distance(&st.q_hat, &st.q_prime_hat).unwrap();
        assert_eq!(st.d_hat, tv);
    }

    #[test]
    fn same_seed_same_stats_across_pool_sizes() {
        let s = scenario(
            DensityMatrix::from_bloch([0.4, 0.3, 0.2]).unwrap(),
            Measurement::sigma_z(),
            Measurement::sigma_x(),
            200_000,
            500,
            9,
        );
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| run_protocol(&s)).unwrap();
        let b = four.install(|| run_protocol(&s)).unwrap();
        assert_eq!(a, b);
        let mut other = s.clone();
        other.seed = 10;
        assert_ne!(run_protocol(&other).unwrap(), a);
    }

    #[test]
    fn analytic_examples() {
        let s = scenario(DensityMatrix::plus(), Measurement::sigma_z(), Measurement::sigma_x(), 10, 2, 0);
        let (q, qp, d) = analytic_statistics(&s).unwrap();
        assert!((q.probs()[0] - 1.0).abs() < 1e-12);
        assert!((qp.probs()[0] - 0.5).abs() < 1e-12);
        assert!((d - 0.5).abs() < 1e-12);

        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        let s = scenario(mixed, Measurement::sigma_z(), Measurement::sigma_x(), 10, 2, 0);
        assert!(analytic_statistics(&s).unwrap().2.abs() < 1e-12);

        let rho = DensityMatrix::from_bloch([0.1, 0.6, -0.3]).unwrap();
        let s = scenario(rho, Measurement::trivial(2).unwrap(), Measurement::sigma_y(), 10, 2, 0);
        assert!(analytic_statistics(&s).unwrap().2.abs() < 1e-12);
    }

    #[test]
    fn invalid_scenarios() {
        let mk = |n, n_u| {
            Scenario::new(
                DensityMatrix::plus(),
                InstrumentSpec::ideal(Measurement::sigma_z()),
                TestMeasurementSpec::ideal(Measurement::sigma_x()),
                n,
                n_u,
                0,
            )
        };
        assert!(mk(10, 10).is_err());
        assert!(mk(10, 0).is_err());
        assert!(mk(10, 3).is_ok());
        assert!(Scenario::new(
            DensityMatrix::maximally_mixed(3).unwrap(),
            InstrumentSpec::ideal(Measurement::sigma_z()),
            TestMeasurementSpec::ideal(Measurement::sigma_x()),
            10,
            3,
            0
        )
        .is_err());
    }

    #[test]
    fn epsilons_of_ideal_devices_vanish() {
        let a = InstrumentSpec::ideal(Measurement::sigma_z());
        let b = TestMeasurementSpec::new(
            Measurement::sigma_x(),
            Some(Measurement::sigma_x().effects().to_vec()),
            0.0,
        )
        .unwrap();
        let (ea, eb) = empirical_epsilons(&a, &b, 200, 3).unwrap();
        assert!(ea < 1e-9 && eb < 1e-9);
    }

    #[test]
    fn depolarizing_epsilon_is_below_weight() {
        let a = InstrumentSpec::depolarizing(Measurement::sigma_z(), 0.02).unwrap();
        let b = TestMeasurementSpec::ideal(Measurement::sigma_x());
        let (ea, _) = empirical_epsilons(&a, &b, 10_000, 5).unwrap();
        assert!(ea <= 0.02 + 1e-9);
        // attained at eigenstates of σz: λ(1 − 1/d)
        assert!(ea > 0.0099);
    }
}
