use std::f64::consts::SQRT_2;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;

use super::random::{random_measurement_with, random_state_with, stream_rng};
use crate::certifier::{certify, CertInput, NoiseParams, Theorem, TrustLevel};
use crate::error::{Error, Result};
use crate::quantum::{
    collision_uncertainty, kl_divergence, lueders_channel, outcome_distribution, overlap_factor,
    overlap_matrix, relative_entropy, renyi_half_entropy, shannon_entropy, trace_distance,
    tv_distance, DensityMatrix, Measurement, MeasurementKind,
};

/// Violations are slacks below `-VIOLATION_TOL`.
pub const VIOLATION_TOL: f64 = 1e-9;

/// Statistics of one inequality `lhs ≥ rhs` over many instances.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkStats {
    pub name: String,
    pub checked: usize,
    pub violations: usize,
    /// Smallest observed `lhs − rhs`.
    pub min_slack: f64,
    /// Largest observed `rhs / lhs` over instances with `lhs > 0`.
    pub tightest_ratio: f64,
    /// Whether some instance met the inequality with equality (slack ≤ 1e-9, `lhs > 0`).
    pub equality_seen: bool,
}

impl LinkStats {
    fn new(name: &str) -> Self {
        LinkStats {
            name: name.to_string(),
            checked: 0,
            violations: 0,
            min_slack: f64::INFINITY,
            tightest_ratio: 0.0,
            equality_seen: false,
        }
    }

    fn record(&mut self, lhs: f64, rhs: f64) {
        let slack = lhs - rhs;
        self.checked += 1;
        if slack < -VIOLATION_TOL || slack.is_nan() {
            self.violations += 1;
        }
        self.min_slack = self.min_slack.min(slack);
        if lhs > 1e-12 {
            self.tightest_ratio = self.tightest_ratio.max(rhs / lhs);
            if slack.abs() <= VIOLATION_TOL {
                self.equality_seen = true;
            }
        }
    }

    fn merge(mut self, other: LinkStats) -> LinkStats {
        self.checked += other.checked;
        self.violations += other.violations;
        self.min_slack = self.min_slack.min(other.min_slack);
        self.tightest_ratio = self.tightest_ratio.max(other.tightest_ratio);
        self.equality_seen |= other.equality_seen;
        self
    }

    /// Largest amount by which `rhs` exceeded `lhs`, zero when none did.
    pub fn max_violation(&self) -> f64 {
        (-self.min_slack).max(0.0)
    }
}

impl fmt::Display for LinkStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<34} checked {:>6}  violations {:>3}  min slack {:+.3e}  tightest ratio {:.6}{}",
            self.name,
            self.checked,
            self.violations,
            self.min_slack,
            self.tightest_ratio,
            if self.equality_seen { "  (equality seen)" } else { "" }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chain {
    /// `δ_{A;ρ} ≥ D(ρ, ρ') ≥ D_{A→B}` for POVM A under the Lüders rule.
    Povm,
    /// `(√2/2) δ_{A;ρ} ≥ D(ρ, ρ') ≥ D_{A→B}` for binary projective A.
    Projective,
    /// `½ δ_{A:B} δ_{A;ρ} ≥ D_{A→B}` for qubit von Neumann pairs.
    VonNeumann,
    /// `H(p) ≥ S(ρ‖Δρ) ≥ KL(q‖q')` for projective A.
    Entropic,
}

impl Chain {
    pub const ALL: [Chain; 4] = [Chain::Povm, Chain::Projective, Chain::VonNeumann, Chain::Entropic];

    pub fn label(self) -> &'static str {
        match self {
            Chain::Povm => "i",
            Chain::Projective => "ii",
            Chain::VonNeumann => "iii",
            Chain::Entropic => "iv",
        }
    }

    fn links(self) -> Vec<LinkStats> {
        let names: &[&str] = match self {
            Chain::Povm => &["delta_A >= D(rho,rho')", "D(rho,rho') >= D(A->B)"],
            Chain::Projective => &["(sqrt2/2) delta_A >= D(rho,rho')", "D(rho,rho') >= D(A->B)"],
            Chain::VonNeumann => &["(1/2) delta_AB delta_A >= D(A->B)"],
            Chain::Entropic => &["H(p) >= S(rho||Delta rho)", "S(rho||Delta rho) >= KL(q||q')"],
        };
        names.iter().map(|n| LinkStats::new(n)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub chain: Chain,
    pub links: Vec<LinkStats>,
}

impl ChainReport {
    pub fn violations(&self) -> usize {
        self.links.iter().map(|l| l.violations).sum()
    }

    pub fn max_violation(&self) -> f64 {
        self.links.iter().map(LinkStats::max_violation).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub chains: Vec<ChainReport>,
}

impl LemmaReport {
    pub fn violations(&self) -> usize {
        self.chains.iter().map(ChainReport::violations).sum()
    }

    pub fn max_violation(&self) -> f64 {
        self.chains.iter().map(ChainReport::max_violation).fold(0.0, f64::max)
    }
}

/// Values entering the chains for one instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainValues {
    pub delta_a: f64,
    pub d_states: f64,
    pub d_ab: f64,
}

/// `δ_{A;ρ}`, `D(ρ, ρ')` and `D_{A→B;ρ}` under the Lüders rule.
pub fn chain_values(rho: &DensityMatrix, a: &Measurement, b: &Measurement) -> Result<ChainValues> {
    let post = lueders_channel(a, rho)?;
    let p = outcome_distribution(a, rho)?;
    let q = outcome_distribution(b, rho)?;
    let qp = outcome_distribution(b, &post)?;
    Ok(ChainValues {
        delta_a: collision_uncertainty(&p),
        d_states: trace_distance(rho, &post)?,
        d_ab: tv_distance(&q, &qp)?,
    })
}

fn instance_dim<R: Rng + ?Sized>(rng: &mut R, dims: &[usize], chain: Chain) -> usize {
    if chain == Chain::VonNeumann {
        2
    } else {
        dims[rng.random_range(0..dims.len())]
    }
}

fn run_instance(chain: Chain, seed: u64, index: u64, dims: &[usize], links: &mut [LinkStats]) -> Result<()> {
    let mut rng = stream_rng(seed, index * 4 + chain as u64);
    let dim = instance_dim(&mut rng, dims, chain);
    let rank = rng.random_range(1..=dim);
    let rho = random_state_with(&mut rng, dim, rank)?;
    match chain {
        Chain::Povm => {
            let k_a = rng.random_range(2..=4);
            let a = random_measurement_with(&mut rng, dim, k_a, MeasurementKind::GeneralPovm)?;
            let k_b = rng.random_range(2..=4);
            let b = random_measurement_with(&mut rng, dim, k_b, MeasurementKind::GeneralPovm)?;
            let v = chain_values(&rho, &a, &b)?;
            links[0].record(v.delta_a, v.d_states);
            links[1].record(v.d_states, v.d_ab);
        }
        Chain::Projective => {
            let a = random_measurement_with(&mut rng, dim, 2, MeasurementKind::Projective)?;
            let k_b = rng.random_range(2..=4);
            let b = random_measurement_with(&mut rng, dim, k_b, MeasurementKind::GeneralPovm)?;
            let v = chain_values(&rho, &a, &b)?;
            links[0].record(SQRT_2 / 2.0 * v.delta_a, v.d_states);
            links[1].record(v.d_states, v.d_ab);
        }
        Chain::VonNeumann => {
            let a = random_measurement_with(&mut rng, 2, 2, MeasurementKind::RankOneProjective)?;
            let b = random_measurement_with(&mut rng, 2, 2, MeasurementKind::RankOneProjective)?;
            let v = chain_values(&rho, &a, &b)?;
            let delta_ab = overlap_factor(&overlap_matrix(&a, &b)?);
            links[0].record(0.5 * delta_ab * v.delta_a, v.d_ab);
        }
        Chain::Entropic => {
            let k_a = rng.random_range(2..=dim);
            let a = random_measurement_with(&mut rng, dim, k_a, MeasurementKind::Projective)?;
            let b = random_measurement_with(&mut rng, dim, dim, MeasurementKind::RankOneProjective)?;
            let dephased = lueders_channel(&a, &rho)?;
            let p = outcome_distribution(&a, &rho)?;
            let q = outcome_distribution(&b, &rho)?;
            let qp = outcome_distribution(&b, &dephased)?;
            let s = relative_entropy(&rho, &dephased)?;
            links[0].record(shannon_entropy(&p), s);
            links[1].record(s, kl_divergence(&q, &qp)?);
        }
    }
    Ok(())
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::InvalidArgument("no dimensions given".into()));
    }
    for &d in dims {
        if !(crate::quantum::MIN_DIM..=crate::quantum::MAX_DIM).contains(&d) {
            return Err(Error::UnsupportedDimension(d));
        }
    }
    Ok(())
}

fn run_chain(chain: Chain, instances: usize, dims: &[usize], seed: u64) -> Result<ChainReport> {
    let links = (0..instances as u64)
        .into_par_iter()
        .try_fold(
            || chain.links(),
            |mut links, k| {
                run_instance(chain, seed, k, dims, &mut links)?;
                Ok::<_, Error>(links)
            },
        )
        .try_reduce(
            || chain.links(),
            |a, b| Ok(a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect()),
        )?;
    Ok(ChainReport { chain, links })
}

/// Checks the four inequality chains on `instances` random instances each.
/// The von Neumann chain always runs on qubits; the projective chain draws
/// binary A.
pub fn verify_lemma_chains(instances: usize, dims: &[usize], seed: u64) -> Result<LemmaReport> {
    if instances == 0 {
        return Err(Error::InvalidArgument("instances must be at least 1".into()));
    }
    check_dims(dims)?;
    let chains = Chain::ALL
        .iter()
        .map(|&c| run_chain(c, instances, dims, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(LemmaReport { chains })
}

/// `4τ² ≥ KL(q‖q') ≥ −log2 c − H½(q)` on random qubit von Neumann instances.
pub fn check_bound_orderings(instances: usize, seed: u64) -> Result<Vec<LinkStats>> {
    if instances == 0 {
        return Err(Error::InvalidArgument("instances must be at least 1".into()));
    }
    let fresh = || vec![LinkStats::new("4 tau^2 >= KL(q||q')"), LinkStats::new("KL(q||q') >= -log2 c - H_1/2(q)")];
    (0..instances as u64)
        .into_par_iter()
        .try_fold(fresh, |mut links, k| {
            let mut rng = stream_rng(seed, k);
            let rank = rng.random_range(1..=2);
            let rho = random_state_with(&mut rng, 2, rank)?;
            let a = random_measurement_with(&mut rng, 2, 2, MeasurementKind::RankOneProjective)?;
            let b = random_measurement_with(&mut rng, 2, 2, MeasurementKind::RankOneProjective)?;
            let c = overlap_matrix(&a, &b)?;
            let post = lueders_channel(&a, &rho)?;
            let q = outcome_distribution(&b, &rho)?;
            let qp = outcome_distribution(&b, &post)?;
            let kl = kl_divergence(&q, &qp)?;
            let delta_ab = overlap_factor(&c);
            let d = tv_distance(&q, &qp)?;
            if delta_ab > 1e-12 {
                let tau = SQRT_2 * d / delta_ab;
                links[0].record(4.0 * tau * tau, kl);
            }
            links[1].record(kl, -c.max_overlap().log2() - renyi_half_entropy(&q));
            Ok::<_, Error>(links)
        })
        .try_reduce(fresh, |a, b| Ok(a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect()))
}

/// Every certified bound against the exact value it must not exceed, on
/// random qubit pure states with random von Neumann A and B.
///
/// Single-shot bounds (T1–T3 and the baseline) are compared with
/// `−log2 max_i p_i`; asymptotic bounds (T4, T5) with `H(p)`, the asymptotic
/// rate of a pure state.
pub fn check_soundness(instances: usize, seed: u64) -> Result<Vec<(Theorem, LinkStats)>> {
    if instances == 0 {
        return Err(Error::InvalidArgument("instances must be at least 1".into()));
    }
    let order = [
        Theorem::T1,
        Theorem::T2,
        Theorem::T3,
        Theorem::T4,
        Theorem::T5,
        Theorem::UncertaintyBaseline,
    ];
    let fresh = || {
        order
            .iter()
            .map(|t| {
                let oracle = match t {
                    Theorem::T4 | Theorem::T5 => "H(p)",
                    _ => "-log2 max p",
                };
                LinkStats::new(&format!("{oracle} >= {t}"))
            })
            .collect::<Vec<_>>()
    };
    let links = (0..instances as u64)
        .into_par_iter()
        .try_fold(fresh, |mut links, k| {
            let mut rng = stream_rng(seed, k);
            let rho = random_state_with(&mut rng, 2, 1)?;
            let a = random_measurement_with(&mut rng, 2, 2, MeasurementKind::RankOneProjective)?;
            let b = random_measurement_with(&mut rng, 2, 2, MeasurementKind::RankOneProjective)?;
            let p = outcome_distribution(&a, &rho)?;
            let post = lueders_channel(&a, &rho)?;
            let q = outcome_distribution(&b, &rho)?;
            let qp = outcome_distribution(&b, &post)?;
            let d = tv_distance(&q, &qp)?;
            let level = TrustLevel::trusted_pair(&a, &b)?;
            let report = certify(&CertInput::new(q, qp, d), &level, NoiseParams::none(), Some(&p))?;
            let hmin = -p.max().log2();
            let h = shannon_entropy(&p);
            for (slot, t) in order.iter().enumerate() {
                if let Some(bound) = report.get(*t) {
                    let oracle = if matches!(t, Theorem::T4 | Theorem::T5) { h } else { hmin };
                    links[slot].record(oracle, bound.bits);
                }
            }
            Ok::<_, Error>(links)
        })
        .try_reduce(fresh, |a, b| Ok(a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect()))?;
    Ok(order.into_iter().zip(links).collect())
}
