use std::f64::consts::SQRT_2;
use std::fmt;

use crate::error::{Error, Result};
use crate::quantum::{
    kl_divergence, overlap_factor, overlap_matrix, renyi_half_entropy, Distribution, Measurement,
    OverlapMatrix,
};

/// Slack allowed past an analytic domain edge before data is rejected.
pub const DOMAIN_TOL: f64 = 1e-9;

/// What the certifying party is willing to assume about A and B.
#[derive(Debug, Clone, PartialEq)]
pub enum TrustLevel {
    /// Any POVM, only device independence assumed.
    UntrustedPovm,
    /// A is projective but otherwise uncharacterized.
    ProjectiveUncharacterized,
    /// A and B are known qubit rank-one projective measurements.
    TrustedVonNeumann(OverlapMatrix),
}

impl TrustLevel {
    pub fn trusted_von_neumann(overlaps: OverlapMatrix) -> Result<Self> {
        if overlaps.dim() != 2 {
            return Err(Error::Unsupported(format!(
                "trusted von Neumann certification is only available for qubits, got dimension {}",
                overlaps.dim()
            )));
        }
        Ok(TrustLevel::TrustedVonNeumann(overlaps))
    }

    /// Trusted level for a pair of qubit rank-one projective measurements.
    pub fn trusted_pair(a: &Measurement, b: &Measurement) -> Result<Self> {
        Self::trusted_von_neumann(overlap_matrix(a, b)?)
    }

    pub fn is_projective(&self) -> bool {
        !matches!(self, TrustLevel::UntrustedPovm)
    }

    pub fn overlaps(&self) -> Option<&OverlapMatrix> {
        match self {
            TrustLevel::TrustedVonNeumann(c) => Some(c),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseParams {
    pub epsilon_a: f64,
    pub epsilon_b: f64,
}

impl NoiseParams {
    pub fn new(epsilon_a: f64, epsilon_b: f64) -> Result<Self> {
        for (name, e) in [("epsilon_a", epsilon_a), ("epsilon_b", epsilon_b)] {
            if !(e.is_finite() && (0.0..=1.0).contains(&e)) {
                return Err(Error::InvalidArgument(format!("{name} = {e} is not in [0, 1]")));
            }
        }
        Ok(NoiseParams { epsilon_a, epsilon_b })
    }

    pub fn none() -> Self {
        NoiseParams::default()
    }

    pub fn is_zero(&self) -> bool {
        self.epsilon_a == 0.0 && self.epsilon_b == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    T1,
    T2,
    T3,
    T4,
    T5,
    UncertaintyBaseline,
}

impl Theorem {
    pub fn label(self) -> &'static str {
        match self {
            Theorem::T1 => "T1",
            Theorem::T2 => "T2",
            Theorem::T3 => "T3",
            Theorem::T4 => "T4",
            Theorem::T5 => "T5",
            Theorem::UncertaintyBaseline => "baseline",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A certified lower bound on the generated randomness, in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct CertBound {
    pub bits: f64,
    pub theorem: Theorem,
    /// Disturbance the bound was evaluated on, after any noise adjustment.
    /// Standalone T3 and T5 bounds record `τ` here; `certify` fills in `d`.
    pub disturbance_used: f64,
    pub tau: Option<f64>,
    pub adjusted: bool,
}

impl CertBound {
    fn new(theorem: Theorem, bits: f64, disturbance_used: f64, tau: Option<f64>) -> Self {
        CertBound {
            bits: bits.max(0.0),
            theorem,
            disturbance_used,
            tau,
            adjusted: false,
        }
    }
}

/// Checks `x ∈ [0, hi]`, clamping overshoots up to [`DOMAIN_TOL`].
fn in_domain(x: f64, hi: f64, what: &str) -> Result<f64> {
    if x.is_nan() || x < -DOMAIN_TOL {
        return Err(Error::InvalidArgument(format!("{what} = {x} is negative")));
    }
    if x > hi + DOMAIN_TOL {
        return Err(Error::InconsistentData(format!(
            "{what} = {x} exceeds the attainable maximum {hi}"
        )));
    }
    Ok(x.clamp(0.0, hi))
}

/// `−log2(½ + ½√(1 − k x²))`
fn collapse_bound(x: f64, k: f64) -> f64 {
    -(0.5 + 0.5 * (1.0 - k * x * x).max(0.0).sqrt()).log2()
}

/// Removes the declared noise from a measured disturbance.
pub fn adjust_disturbance(d_re: f64, noise: NoiseParams, level: &TrustLevel) -> f64 {
    let shift = match level {
        TrustLevel::TrustedVonNeumann(_) => noise.epsilon_a + 2.0 * noise.epsilon_b,
        _ => noise.epsilon_a,
    };
    (d_re - shift).max(0.0)
}

/// Bound for a binary POVM A.
pub fn bound_theorem1(d: f64) -> Result<CertBound> {
    let d = in_domain(d, SQRT_2 / 2.0, "disturbance")?;
    Ok(CertBound::new(Theorem::T1, collapse_bound(d, 2.0), d, None))
}

/// Bound for a binary projective A.
pub fn bound_theorem2(d: f64) -> Result<CertBound> {
    let d = in_domain(d, 0.5, "disturbance")?;
    Ok(CertBound::new(Theorem::T2, collapse_bound(d, 4.0), d, None))
}

/// `τ = √2 d / δ_AB`
pub fn modified_disturbance(d: f64, delta_ab: f64) -> Result<f64> {
    if d.is_nan() || d < 0.0 || delta_ab.is_nan() || delta_ab < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "need d ≥ 0 and δ ≥ 0, got d = {d}, δ = {delta_ab}"
        )));
    }
    if delta_ab == 0.0 {
        if d > DOMAIN_TOL {
            return Err(Error::InconsistentData(format!(
                "disturbance {d} between identical measurements"
            )));
        }
        return Ok(0.0);
    }
    Ok(SQRT_2 * d / delta_ab)
}

/// Bound for a trusted qubit von Neumann pair, from the modified disturbance.
pub fn bound_theorem3(tau: f64) -> Result<CertBound> {
    let tau = in_domain(tau, 0.5, "modified disturbance")?;
    Ok(CertBound::new(Theorem::T3, collapse_bound(tau, 4.0), tau, Some(tau)))
}

/// Asymptotic bound `KL(q‖q')`, capped at `log2(a_outcomes)`.
pub fn bound_theorem4(q: &Distribution, q_prime: &Distribution, a_outcomes: usize) -> Result<CertBound> {
    if a_outcomes == 0 {
        return Err(Error::InvalidArgument("A needs at least one outcome".into()));
    }
    let kl = kl_divergence(q, q_prime)?;
    let cap = (a_outcomes as f64).log2();
    let d = crate::quantum::tv_distance(q, q_prime)?;
    Ok(CertBound::new(Theorem::T4, kl.min(cap), d, None))
}

/// Asymptotic bound `4τ²` for a trusted binary qubit pair.
pub fn bound_theorem5(tau: f64) -> Result<CertBound> {
    let tau = in_domain(tau, 0.5, "modified disturbance")?;
    Ok(CertBound::new(Theorem::T5, (4.0 * tau * tau).min(1.0), tau, Some(tau)))
}

/// `max(0, −log2 c − H½(q))`
pub fn bound_uncertainty_baseline(c_max: f64, q: &Distribution) -> Result<CertBound> {
    if !(c_max > 0.0 && c_max <= 1.0 + DOMAIN_TOL) {
        return Err(Error::InvalidArgument(format!("c = {c_max} is not in (0, 1]")));
    }
    let bits = -c_max.min(1.0).log2() - renyi_half_entropy(q);
    Ok(CertBound::new(Theorem::UncertaintyBaseline, bits, 0.0, None))
}

/// Statistics a certification starts from.
#[derive(Debug, Clone, PartialEq)]
pub struct CertInput {
    pub q: Distribution,
    pub q_prime: Distribution,
    pub d: f64,
}

impl CertInput {
    pub fn new(q: Distribution, q_prime: Distribution, d: f64) -> Self {
        CertInput { q, q_prime, d }
    }
}

impl From<&crate::protocol::EmpiricalStats> for CertInput {
    fn from(s: &crate::protocol::EmpiricalStats) -> Self {
        CertInput::new(s.q_hat.clone(), s.q_prime_hat.clone(), s.d_hat)
    }
}

impl From<(Distribution, Distribution, f64)> for CertInput {
    fn from((q, q_prime, d): (Distribution, Distribution, f64)) -> Self {
        CertInput::new(q, q_prime, d)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertReport {
    pub bounds: Vec<CertBound>,
    /// The largest applicable bound; the first one listed wins ties.
    pub best: CertBound,
}

impl CertReport {
    pub fn get(&self, theorem: Theorem) -> Option<&CertBound> {
        self.bounds.iter().find(|b| b.theorem == theorem)
    }
}

/// Every bound applicable at `level`.
///
/// `p` is the outcome distribution of A when known; only its length is used,
/// to fix the number of outcomes (two otherwise). The single-shot theorems
/// apply to binary A only and are omitted for larger alphabets.
pub fn certify(
    input: &CertInput,
    level: &TrustLevel,
    noise: NoiseParams,
    p: Option<&Distribution>,
) -> Result<CertReport> {
    let a_outcomes = p.map_or(2, Distribution::len);
    if level.overlaps().is_some() && a_outcomes != 2 {
        return Err(Error::InconsistentData(format!(
            "trusted qubit pair but A has {a_outcomes} outcomes"
        )));
    }
    let d = in_domain(input.d, 1.0, "disturbance")?;
    let adjusted = !noise.is_zero();
    let mut bounds = Vec::new();

    if a_outcomes == 2 {
        let d_a = adjust_disturbance(d, noise, &TrustLevel::UntrustedPovm);
        bounds.push(bound_theorem1(d_a)?);
        if level.is_projective() {
            bounds.push(bound_theorem2(d_a)?);
        }
        for b in &mut bounds {
            b.adjusted = adjusted;
        }
    }

    let t4 = bound_theorem4(&input.q, &input.q_prime, a_outcomes)?;

    if let TrustLevel::TrustedVonNeumann(c) = level {
        let d_ab = adjust_disturbance(d, noise, level);
        let tau = modified_disturbance(d_ab, overlap_factor(c))?;
        for mut b in [bound_theorem3(tau)?, t4, bound_theorem5(tau)?] {
            if b.theorem != Theorem::T4 {
                b.disturbance_used = d_ab;
                b.adjusted = adjusted;
            }
            bounds.push(b);
        }
        let mut base = bound_uncertainty_baseline(c.max_overlap(), &input.q)?;
        base.disturbance_used = d;
        bounds.push(base);
    } else {
        bounds.push(t4);
    }

    let best = bounds
        .iter()
        .fold(None::<&CertBound>, |acc, b| match acc {
            Some(a) if a.bits >= b.bits => Some(a),
            _ => Some(b),
        })
        .expect("T4 is always present")
        .clone();
    Ok(CertReport { bounds, best })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn theorem1_values() {
        close(bound_theorem1(0.5).unwrap().bits, 1.0 - (1.0 + 0.5f64.sqrt()).log2(), 1e-15);
        close(bound_theorem1(0.5).unwrap().bits, 0.228447, 1e-6);
        assert_eq!(bound_theorem1(0.0).unwrap().bits, 0.0);
        close(bound_theorem1(SQRT_2 / 2.0).unwrap().bits, 1.0, 1e-12);
        assert!(matches!(bound_theorem1(0.71), Err(Error::InconsistentData(_))));
        assert!(bound_theorem1(SQRT_2 / 2.0 + 5e-10).is_ok());
    }

    #[test]
    fn theorem2_values() {
        close(bound_theorem2(0.5).unwrap().bits, 1.0, 1e-15);
        assert_eq!(bound_theorem2(0.0).unwrap().bits, 0.0);
        close(bound_theorem2(0.25).unwrap().bits, 0.100031, 1e-6);
        assert!(bound_theorem2(0.5 + 1e-8).is_err());
    }

    #[test]
    fn modified_disturbance_values() {
        close(modified_disturbance(0.5, SQRT_2).unwrap(), 0.5, 1e-15);
        assert_eq!(modified_disturbance(0.0, 0.7).unwrap(), 0.0);
        close(modified_disturbance(0.3, 1.224745).unwrap(), 0.346410, 1e-6);
        assert_eq!(modified_disturbance(0.0, 0.0).unwrap(), 0.0);
        assert!(matches!(modified_disturbance(0.1, 0.0), Err(Error::InconsistentData(_))));
    }

    #[test]
    fn theorem3_and_5_values() {
        close(bound_theorem3(0.5).unwrap().bits, 1.0, 1e-15);
        assert_eq!(bound_theorem3(0.0).unwrap().bits, 0.0);
        close(bound_theorem3(0.346410).unwrap().bits, 0.216660, 1e-6);
        close(bound_theorem5(0.5).unwrap().bits, 1.0, 1e-15);
        assert_eq!(bound_theorem5(0.0).unwrap().bits, 0.0);
        close(bound_theorem5(0.25).unwrap().bits, 0.25, 1e-15);
        assert!(bound_theorem5(0.6).is_err());
    }

    #[test]
    fn theorem4_values() {
        let q = Distribution::new(vec![1.0, 0.0]).unwrap();
        let u = Distribution::uniform(2).unwrap();
        close(bound_theorem4(&q, &u, 2).unwrap().bits, 1.0, 1e-15);
        assert_eq!(bound_theorem4(&u, &u, 2).unwrap().bits, 0.0);
        let q9 = Distribution::new(vec![0.9, 0.1]).unwrap();
        close(bound_theorem4(&q9, &u, 2).unwrap().bits, 0.531004, 1e-6);
        // infinite divergence is capped
        assert_eq!(bound_theorem4(&u, &q, 2).unwrap().bits, 1.0);
        let three = Distribution::uniform(3).unwrap();
        assert!(bound_theorem4(&q, &three, 2).is_err());
    }

    #[test]
    fn baseline_values() {
        let q = Distribution::new(vec![1.0, 0.0]).unwrap();
        close(bound_uncertainty_baseline(0.5, &q).unwrap().bits, 1.0, 1e-15);
        assert_eq!(bound_uncertainty_baseline(1.0, &Distribution::uniform(2).unwrap()).unwrap().bits, 0.0);
        close(bound_uncertainty_baseline(0.62, &q).unwrap().bits, 0.689660, 1e-6);
        assert!(bound_uncertainty_baseline(0.0, &q).is_err());
    }

    #[test]
    fn adjust_examples() {
        let trusted = TrustLevel::trusted_von_neumann(OverlapMatrix::qubit(0.5).unwrap()).unwrap();
        let noise = NoiseParams::new(0.02, 0.01).unwrap();
        close(adjust_disturbance(0.5, noise, &trusted), 0.46, 1e-15);
        close(adjust_disturbance(0.5, noise, &TrustLevel::UntrustedPovm), 0.48, 1e-15);
        assert_eq!(adjust_disturbance(0.37, NoiseParams::none(), &trusted), 0.37);
        let big = NoiseParams::new(0.05, 0.0).unwrap();
        assert_eq!(adjust_disturbance(0.01, big, &TrustLevel::UntrustedPovm), 0.0);
    }

    fn worked() -> CertInput {
        CertInput::new(
            Distribution::new(vec![1.0, 0.0]).unwrap(),
            Distribution::uniform(2).unwrap(),
            0.5,
        )
    }

    #[test]
    fn certify_worked_example() {
        let trusted = TrustLevel::trusted_pair(&Measurement::sigma_z(), &Measurement::sigma_x()).unwrap();
        let r = certify(&worked(), &trusted, NoiseParams::none(), None).unwrap();
        let names: Vec<_> = r.bounds.iter().map(|b| b.theorem).collect();
        assert_eq!(
            names,
            [Theorem::T1, Theorem::T2, Theorem::T3, Theorem::T4, Theorem::T5, Theorem::UncertaintyBaseline]
        );
        close(r.best.bits, 1.0, 1e-12);
        assert_eq!(r.best.theorem, Theorem::T2);
        for t in [Theorem::T2, Theorem::T3, Theorem::T4, Theorem::T5] {
            close(r.get(t).unwrap().bits, 1.0, 1e-9);
        }
    }

    #[test]
    fn certify_mixed_state_is_zero() {
        let u = Distribution::uniform(2).unwrap();
        let input = CertInput::new(u.clone(), u, 0.0);
        let trusted = TrustLevel::trusted_pair(&Measurement::sigma_z(), &Measurement::sigma_x()).unwrap();
        let r = certify(&input, &trusted, NoiseParams::none(), None).unwrap();
        assert!(r.bounds.iter().all(|b| b.bits == 0.0));
    }

    #[test]
    fn certify_with_noise() {
        let trusted = TrustLevel::trusted_pair(&Measurement::sigma_z(), &Measurement::sigma_x()).unwrap();
        let noise = NoiseParams::new(0.02, 0.01).unwrap();
        let r = certify(&worked(), &trusted, noise, None).unwrap();
        let t3 = r.get(Theorem::T3).unwrap();
        close(t3.tau.unwrap(), 0.46, 1e-12);
        assert!(t3.adjusted);
        assert!(t3.bits < 1.0);
        close(r.get(Theorem::T1).unwrap().disturbance_used, 0.48, 1e-12);
        let clean = certify(&worked(), &trusted, NoiseParams::none(), None).unwrap();
        for (a, b) in r.bounds.iter().zip(&clean.bounds) {
            assert!(a.bits <= b.bits);
        }
    }

    #[test]
    fn certify_levels_and_errors() {
        let r = certify(&worked(), &TrustLevel::UntrustedPovm, NoiseParams::none(), None).unwrap();
        assert_eq!(r.bounds.len(), 2);
        let r = certify(&worked(), &TrustLevel::ProjectiveUncharacterized, NoiseParams::none(), None).unwrap();
        assert_eq!(r.bounds.len(), 3);
        let p3 = Distribution::uniform(3).unwrap();
        let r = certify(&worked(), &TrustLevel::UntrustedPovm, NoiseParams::none(), Some(&p3)).unwrap();
        assert_eq!(r.bounds.len(), 1);
        assert_eq!(r.best.theorem, Theorem::T4);

        let mut bad = worked();
        bad.d = 0.8;
        assert!(matches!(
            certify(&bad, &TrustLevel::UntrustedPovm, NoiseParams::none(), None),
            Err(Error::InconsistentData(_))
        ));
        assert!(TrustLevel::trusted_von_neumann(OverlapMatrix::new(vec![vec![1.0 / 3.0; 3]; 3]).unwrap()).is_err());
    }

    #[test]
    fn ordering_at_equal_argument() {
        let delta = overlap_factor(&OverlapMatrix::qubit(0.75).unwrap());
        for k in 0..=50 {
            let d = 0.5 * k as f64 / 50.0;
            let t1 = bound_theorem1(d).unwrap().bits;
            let t2 = bound_theorem2(d).unwrap().bits;
            assert!(t2 >= t1);
            let tau = modified_disturbance(d, delta).unwrap();
            if tau <= 0.5 {
                assert!(bound_theorem3(tau).unwrap().bits >= t2);
            }
        }
    }
}
