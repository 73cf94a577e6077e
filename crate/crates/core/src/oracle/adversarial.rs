//! Non-Lüders realizations of A and what they do to naive certification.

use std::fmt;

use rand::Rng;

use super::random::{haar_unitary, random_measurement_with, random_state_with, stream_rng};
use crate::certifier::bound_theorem1;
use crate::error::Result;
use crate::quantum::{
    collision_uncertainty, lueders_channel, outcome_distribution, pauli_x, realized_instrument,
    trace_distance, tv_distance, CMatrix, DensityMatrix, Measurement, MeasurementKind,
};

/// One state, measurement pair and realization with the resulting numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct DemoCase {
    pub label: String,
    pub rho_bloch: [f64; 3],
    pub b_bloch: [f64; 3],
    pub unitaries: Vec<CMatrix>,
    /// `δ_{A;ρ}`
    pub delta_a: f64,
    /// Disturbance of B under the given realization.
    pub d_realized: f64,
    /// Disturbance of B under the Lüders rule.
    pub d_lueders: f64,
    /// `−log2 max_i p_i`, exact for the pure states used here.
    pub hmin: f64,
    /// T1 evaluated on `d_realized`; `None` when outside its domain.
    pub naive_bound: Option<f64>,
}

impl DemoCase {
    /// Whether the naive bound stays below the true min-entropy.
    pub fn sound(&self) -> bool {
        self.naive_bound.is_none_or(|b| b <= self.hmin + 1e-9)
    }

    /// Whether `δ_{A;ρ} ≥ D` fails for the realized disturbance.
    pub fn breaks_chain(&self) -> bool {
        self.d_realized > self.delta_a + 1e-9
    }
}

impl fmt::Display for DemoCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bloch = |r: &[f64; 3]| format!("({:+.4}, {:+.4}, {:+.4})", r[0], r[1], r[2]);
        writeln!(f, "{}", self.label)?;
        writeln!(f, "  rho Bloch {}  B axis {}", bloch(&self.rho_bloch), bloch(&self.b_bloch))?;
        writeln!(
            f,
            "  delta_A {:.6}  D realized {:.6}  D Lueders {:.6}  H_min {:.6}",
            self.delta_a, self.d_realized, self.d_lueders, self.hmin
        )?;
        match self.naive_bound {
            Some(b) => write!(f, "  naive T1 bound {b:.6}  sound: {}", self.sound()),
            None => write!(f, "  naive T1 bound rejected: disturbance outside its domain"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdversarialReport {
    /// `U = {I, σx}` on `|1⟩`: the state is reset but nothing is certified.
    pub flip: DemoCase,
    /// Largest entry difference between `U = {I, I}` and the Lüders update.
    pub identity_deviation: f64,
    /// Searched instance maximizing `D_realized − δ_{A;ρ}`.
    pub chain_breaker: DemoCase,
    /// Searched instance maximizing `naive bound − H_min`.
    pub unsound: DemoCase,
}

fn case(
    label: &str,
    rho: &DensityMatrix,
    b: &Measurement,
    b_bloch: [f64; 3],
    unitaries: Vec<CMatrix>,
) -> Result<DemoCase> {
    let a = Measurement::sigma_z();
    let p = outcome_distribution(&a, rho)?;
    let q = outcome_distribution(b, rho)?;
    let real = realized_instrument(&a, &unitaries, rho)?;
    let ideal = lueders_channel(&a, rho)?;
    let d_realized = tv_distance(&q, &outcome_distribution(b, &real)?)?;
    Ok(DemoCase {
        label: label.to_string(),
        rho_bloch: rho.bloch()?,
        b_bloch,
        unitaries,
        delta_a: collision_uncertainty(&p),
        d_realized,
        d_lueders: tv_distance(&q, &outcome_distribution(b, &ideal)?)?,
        hmin: (-p.max().log2()).max(0.0),
        naive_bound: bound_theorem1(d_realized).ok().map(|c| c.bits),
    })
}

fn axis(b: &Measurement) -> Result<[f64; 3]> {
    // Bloch vector of the first basis state
    DensityMatrix::new(b.effects()[0].clone())?.bloch()
}

/// Runs the fixed examples and a `search`-instance random search over pure
/// qubit states, measurements B and realization unitaries, with A = σz.
pub fn adversarial_realization_demo(seed: u64, search: usize) -> Result<AdversarialReport> {
    let eye = CMatrix::identity(2);
    let sx = Measurement::sigma_x();
    let flip = case(
        "U = {I, X}, rho = |1><1|, A = Z, B = X",
        &DensityMatrix::one(),
        &sx,
        [1.0, 0.0, 0.0],
        vec![eye.clone(), pauli_x()],
    )?;

    let rho = DensityMatrix::from_bloch([0.3, -0.5, 0.6])?;
    let a = Measurement::sigma_z();
    let same = realized_instrument(&a, &[eye.clone(), eye.clone()], &rho)?;
    let identity_deviation = same.op().max_abs_diff(lueders_channel(&a, &rho)?.op());

    let mut breaker: Option<(f64, DemoCase)> = None;
    let mut unsound: Option<(f64, DemoCase)> = None;
    for k in 0..search.max(1) as u64 {
        let mut rng = stream_rng(seed, k);
        // bias towards nearly deterministic outcomes, where H_min is small
        let rho = if rng.random_bool(0.5) {
            let t: f64 = rng.random_range(0.0..0.3);
            let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            DensityMatrix::from_bloch([t.sin() * phi.cos(), t.sin() * phi.sin(), t.cos()])?
        } else {
            random_state_with(&mut rng, 2, 1)?
        };
        let b = random_measurement_with(&mut rng, 2, 2, MeasurementKind::RankOneProjective)?;
        let us = vec![haar_unitary(&mut rng, 2), haar_unitary(&mut rng, 2)];
        let c = case("searched", &rho, &b, axis(&b)?, us)?;
        let excess = c.d_realized - c.delta_a;
        if breaker.as_ref().is_none_or(|(e, _)| excess > *e) {
            breaker = Some((excess, c.clone()));
        }
        if let Some(bound) = c.naive_bound {
            let gap = bound - c.hmin;
            if unsound.as_ref().is_none_or(|(g, _)| gap > *g) {
                unsound = Some((gap, c));
            }
        }
    }
    let mut chain_breaker = breaker.expect("at least one instance").1;
    chain_breaker.label = "searched: largest D_realized - delta_A".into();
    let mut unsound = unsound.map_or_else(|| flip.clone(), |(_, c)| c);
    unsound.label = "searched: largest naive bound - H_min".into();

    Ok(AdversarialReport {
        flip,
        identity_deviation,
        chain_breaker,
        unsound,
    })
}

/// Checks `D(Λ(ρ), ρ)` for the realized channel against `δ_{A;ρ}`.
pub fn state_change(rho: &DensityMatrix, unitaries: &[CMatrix]) -> Result<f64> {
    let real = realized_instrument(&Measurement::sigma_z(), unitaries, rho)?;
    trace_distance(&real, rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_examples() {
        let r = adversarial_realization_demo(7, 2000).unwrap();
        assert!(r.flip.d_realized.abs() < 1e-12);
        assert!(r.flip.hmin.abs() < 1e-12);
        assert_eq!(r.flip.naive_bound, Some(0.0));
        assert!(r.flip.sound());
        assert!(r.identity_deviation < 1e-12);
        assert!(r.chain_breaker.breaks_chain());
        assert!(!r.unsound.sound());
    }

    #[test]
    fn flip_resets_the_state() {
        let eye = CMatrix::identity(2);
        let d = state_change(&DensityMatrix::one(), &[eye, pauli_x()]).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
    }
}
