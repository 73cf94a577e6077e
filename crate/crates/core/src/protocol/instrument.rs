use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quantum::matrix::{CMatrix, ONE, ZERO};
use crate::quantum::{
    effect_roots, outcome_distribution, sum_conjugations, validate_unitaries, DensityMatrix,
    Distribution, Measurement, VALIDATION_TOL,
};

/// How the randomness-generating measurement updates the state.
#[derive(Debug, Clone, PartialEq)]
pub enum Realization {
    /// `ρ ↦ Σ √M_i ρ √M_i`
    IdealLueders,
    /// `ρ ↦ Σ U_i √M_i ρ √M_i U_i†`, one unitary per outcome.
    RealizationUnitaries(Vec<CMatrix>),
    /// Lüders update followed by the channel with these Kraus operators.
    NoisyChannel { kraus: Vec<CMatrix> },
}

/// The randomness-generating measurement A together with its physical
/// realization and the declared worst-case deviation `ε_A` from the ideal.
#[derive(Debug, Clone, PartialEq)]
pub struct InstrumentSpec {
    measurement: Measurement,
    realization: Realization,
    epsilon_a: f64,
}

fn check_epsilon(name: &str, eps: f64) -> Result<()> {
    if eps.is_finite() && (0.0..=1.0).contains(&eps) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} = {eps} is not in [0, 1]")))
    }
}

impl InstrumentSpec {
    pub fn new(measurement: Measurement, realization: Realization, epsilon_a: f64) -> Result<Self> {
        check_epsilon("epsilon_a", epsilon_a)?;
        match &realization {
            Realization::IdealLueders => {}
            Realization::RealizationUnitaries(us) => validate_unitaries(&measurement, us)?,
            Realization::NoisyChannel { kraus } => validate_kraus(measurement.dim(), kraus)?,
        }
        Ok(InstrumentSpec {
            measurement,
            realization,
            epsilon_a,
        })
    }

    pub fn ideal(measurement: Measurement) -> Self {
        InstrumentSpec {
            measurement,
            realization: Realization::IdealLueders,
            epsilon_a: 0.0,
        }
    }

    /// Lüders update followed by depolarizing noise of weight `lambda`,
    /// `σ ↦ (1 − λ)σ + λ I/d`. Declares `ε_A = λ`.
    pub fn depolarizing(measurement: Measurement, lambda: f64) -> Result<Self> {
        check_epsilon("depolarizing weight", lambda)?;
        let kraus = depolarizing_kraus(measurement.dim(), lambda);
        Self::new(measurement, Realization::NoisyChannel { kraus }, lambda)
    }

    /// Lüders update followed by qubit amplitude damping with rate `gamma`.
    /// Declares `ε_A = γ`.
    pub fn amplitude_damping(measurement: Measurement, gamma: f64) -> Result<Self> {
        check_epsilon("damping rate", gamma)?;
        if measurement.dim() != 2 {
            return Err(Error::Unsupported(
                "amplitude damping is defined for qubits only".into(),
            ));
        }
        let kraus = amplitude_damping_kraus(gamma);
        Self::new(measurement, Realization::NoisyChannel { kraus }, gamma)
    }

    pub fn with_epsilon(mut self, epsilon_a: f64) -> Result<Self> {
        check_epsilon("epsilon_a", epsilon_a)?;
        self.epsilon_a = epsilon_a;
        Ok(self)
    }

    pub fn measurement(&self) -> &Measurement {
        &self.measurement
    }

    pub fn realization(&self) -> &Realization {
        &self.realization
    }

    pub fn epsilon_a(&self) -> f64 {
        self.epsilon_a
    }

    /// Kraus operators of the branch for each outcome `i`; the (unnormalized)
    /// post-measurement state of outcome `i` is `Σ_k K_ik ρ K_ik†`.
    pub fn branch_kraus(&self) -> Result<Vec<Vec<CMatrix>>> {
        let roots = effect_roots(&self.measurement)?;
        Ok(match &self.realization {
            Realization::IdealLueders => roots.into_iter().map(|r| vec![r]).collect(),
            Realization::RealizationUnitaries(us) => {
                roots.iter().zip(us).map(|(r, u)| vec![u * r]).collect()
            }
            Realization::NoisyChannel { kraus } => roots
                .iter()
                .map(|r| kraus.iter().map(|k| k * r).collect())
                .collect(),
        })
    }

    /// The realized channel `Λ_re`.
    pub fn real_channel(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let all: Vec<CMatrix> = self.branch_kraus()?.into_iter().flatten().collect();
        Ok(DensityMatrix::from_channel_output(sum_conjugations(&all, rho.op())))
    }
}

fn validate_kraus(dim: usize, kraus: &[CMatrix]) -> Result<()> {
    if kraus.is_empty() {
        return Err(Error::InvalidArgument("empty Kraus set".into()));
    }
    let mut sum = CMatrix::zeros(dim);
    for k in kraus {
        if k.dim() != dim {
            return Err(Error::DimensionMismatch(k.dim(), dim));
        }
        sum = &sum + &(&k.adjoint() * k);
    }
    let dev = sum.max_abs_diff(&CMatrix::identity(dim));
    if dev > VALIDATION_TOL {
        return Err(Error::InvalidArgument(format!(
            "Kraus operators are not trace preserving (deviation {dev:.3e})"
        )));
    }
    Ok(())
}

/// Kraus set `{√(1−λ) I} ∪ {(√λ/d) X^a Z^b}` built from the clock and shift
/// operators, so that `Σ K σ K† = (1 − λ)σ + λ tr(σ) I/d`.
pub fn depolarizing_kraus(dim: usize, lambda: f64) -> Vec<CMatrix> {
    let mut kraus = vec![CMatrix::identity(dim).scale_real((1.0 - lambda).sqrt())];
    if lambda == 0.0 {
        return kraus;
    }
    let w = lambda.sqrt() / dim as f64;
    let omega = 2.0 * std::f64::consts::PI / dim as f64;
    for a in 0..dim {
        for b in 0..dim {
            // (X^a Z^b)|j⟩ = ω^{bj} |j + a⟩
            let op = CMatrix::from_fn(dim, |row, col| {
                if row == (col + a) % dim {
                    Complex64::from_polar(w, omega * (b * col) as f64)
                } else {
                    ZERO
                }
            });
            kraus.push(op);
        }
    }
    kraus
}

pub fn amplitude_damping_kraus(gamma: f64) -> Vec<CMatrix> {
    let k0 = CMatrix::from_row_major(vec![
        ONE,
        ZERO,
        ZERO,
        Complex64::new((1.0 - gamma).sqrt(), 0.0),
    ])
    .expect("2x2");
    let k1 = CMatrix::from_row_major(vec![ZERO, Complex64::new(gamma.sqrt(), 0.0), ZERO, ZERO])
        .expect("2x2");
    vec![k0, k1]
}

/// The test measurement B, optionally with the effects the device actually
/// implements, and the declared deviation `ε_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestMeasurementSpec {
    measurement: Measurement,
    real_effects: Option<Measurement>,
    epsilon_b: f64,
}

impl TestMeasurementSpec {
    pub fn new(measurement: Measurement, real_effects: Option<Vec<CMatrix>>, epsilon_b: f64) -> Result<Self> {
        check_epsilon("epsilon_b", epsilon_b)?;
        let real_effects = match real_effects {
            Some(effects) => {
                if effects.len() != measurement.outcomes() {
                    return Err(Error::CountMismatch {
                        expected: measurement.outcomes(),
                        got: effects.len(),
                    });
                }
                let m = Measurement::general(effects)?;
                if m.dim() != measurement.dim() {
                    return Err(Error::DimensionMismatch(m.dim(), measurement.dim()));
                }
                Some(m)
            }
            None => None,
        };
        Ok(TestMeasurementSpec {
            measurement,
            real_effects,
            epsilon_b,
        })
    }

    pub fn ideal(measurement: Measurement) -> Self {
        TestMeasurementSpec {
            measurement,
            real_effects: None,
            epsilon_b: 0.0,
        }
    }

    pub fn measurement(&self) -> &Measurement {
        &self.measurement
    }

    pub fn real_effects(&self) -> Option<&Measurement> {
        self.real_effects.as_ref()
    }

    /// What the device measures: the real effects when given, otherwise the
    /// ideal ones.
    pub fn sampled(&self) -> &Measurement {
        self.real_effects.as_ref().unwrap_or(&self.measurement)
    }

    pub fn epsilon_b(&self) -> f64 {
        self.epsilon_b
    }
}

/// Outcome statistics of A and the post-measurement state under the
/// realized instrument.
pub fn apply_real_instrument(
    spec: &InstrumentSpec,
    rho: &DensityMatrix,
) -> Result<(Distribution, DensityMatrix)> {
    let p = outcome_distribution(spec.measurement(), rho)?;
    let post = spec.real_channel(rho)?;
    Ok((p, post))
}
