use num_complex::Complex64;

use super::matrix::{c, inner, normalized, CMatrix, CVector, ONE, ZERO};
use super::{check_dim, VALIDATION_TOL};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasurementKind {
    GeneralPovm,
    Projective,
    RankOneProjective,
}

/// An ordered list of POVM effects together with the structure they are
/// known to have.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    effects: Vec<CMatrix>,
    kind: MeasurementKind,
    basis: Option<Vec<CVector>>,
}

impl Measurement {
    /// A general POVM: Hermitian, positive effects summing to the identity.
    pub fn general(effects: Vec<CMatrix>) -> Result<Self> {
        validate_povm(&effects)?;
        Ok(Measurement {
            effects,
            kind: MeasurementKind::GeneralPovm,
            basis: None,
        })
    }

    /// A projective measurement: idempotent, mutually orthogonal effects.
    pub fn projective(effects: Vec<CMatrix>) -> Result<Self> {
        validate_povm(&effects)?;
        for (i, e) in effects.iter().enumerate() {
            let err = (e * e).max_abs_diff(e);
            if err > VALIDATION_TOL {
                return Err(Error::InvalidMeasurement(format!(
                    "effect {i} is not idempotent (deviation {err:.3e})"
                )));
            }
            for (j, f) in effects.iter().enumerate().skip(i + 1) {
                let cross = (e * f).max_abs_diff(&CMatrix::zeros(e.dim()));
                if cross > VALIDATION_TOL {
                    return Err(Error::InvalidMeasurement(format!(
                        "effects {i} and {j} are not orthogonal"
                    )));
                }
            }
        }
        Ok(Measurement {
            effects,
            kind: MeasurementKind::Projective,
            basis: None,
        })
    }

    /// A von Neumann measurement in the orthonormal basis `basis`.
    pub fn rank_one(basis: Vec<CVector>) -> Result<Self> {
        let dim = basis.len();
        check_dim(dim)?;
        for (i, b) in basis.iter().enumerate() {
            if b.len() != dim {
                return Err(Error::DimensionMismatch(b.len(), dim));
            }
            for (j, b2) in basis.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                let ov = inner(b, b2);
                if (ov - c(expect, 0.0)).norm() > VALIDATION_TOL {
                    return Err(Error::InvalidMeasurement(format!(
                        "basis vectors {i} and {j} are not orthonormal"
                    )));
                }
            }
        }
        let effects = basis.iter().map(|b| CMatrix::projector(b)).collect();
        Ok(Measurement {
            effects,
            kind: MeasurementKind::RankOneProjective,
            basis: Some(basis),
        })
    }

    /// Basis from the columns of a unitary.
    pub fn from_unitary_columns(u: &CMatrix) -> Result<Self> {
        Self::rank_one((0..u.dim()).map(|k| u.column(k)).collect())
    }

    pub fn computational(dim: usize) -> Result<Self> {
        Self::from_unitary_columns(&CMatrix::identity(dim))
    }

    pub fn sigma_z() -> Self {
        Self::computational(2).expect("qubit basis")
    }

    pub fn sigma_x() -> Self {
        Self::qubit_angle(std::f64::consts::FRAC_PI_2)
    }

    pub fn sigma_y() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::rank_one(vec![vec![c(s, 0.0), c(0.0, s)], vec![c(s, 0.0), c(0.0, -s)]])
            .expect("qubit basis")
    }

    /// Qubit basis rotated by `theta` about the y axis:
    /// `|b0⟩ = cos(θ/2)|0⟩ + sin(θ/2)|1⟩`, `|b1⟩ = −sin(θ/2)|0⟩ + cos(θ/2)|1⟩`,
    /// so `|⟨0|b0⟩|² = cos²(θ/2)`.
    pub fn qubit_angle(theta: f64) -> Self {
        let (s, co) = (theta / 2.0).sin_cos();
        Self::rank_one(vec![vec![c(co, 0.0), c(s, 0.0)], vec![c(-s, 0.0), c(co, 0.0)]])
            .expect("rotated qubit basis")
    }

    /// The single-outcome measurement `{I}`.
    pub fn trivial(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Self::projective(vec![CMatrix::identity(dim)])
    }

    pub fn effects(&self) -> &[CMatrix] {
        &self.effects
    }

    pub fn kind(&self) -> MeasurementKind {
        self.kind
    }

    pub fn basis(&self) -> Option<&[CVector]> {
        self.basis.as_deref()
    }

    pub fn outcomes(&self) -> usize {
        self.effects.len()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    pub fn is_projective(&self) -> bool {
        matches!(
            self.kind,
            MeasurementKind::Projective | MeasurementKind::RankOneProjective
        )
    }

    pub(crate) fn require_rank_one(&self) -> Result<&[CVector]> {
        self.basis().ok_or_else(|| {
            Error::InvalidMeasurement(format!(
                "a rank-one projective measurement is required, got {:?}",
                self.kind
            ))
        })
    }
}

fn validate_povm(effects: &[CMatrix]) -> Result<()> {
    let first = effects
        .first()
        .ok_or_else(|| Error::InvalidMeasurement("no effects".into()))?;
    let dim = first.dim();
    check_dim(dim)?;
    let mut sum = CMatrix::zeros(dim);
    for (i, e) in effects.iter().enumerate() {
        if e.dim() != dim {
            return Err(Error::DimensionMismatch(e.dim(), dim));
        }
        let herm = e.hermiticity_error();
        if herm > VALIDATION_TOL {
            return Err(Error::InvalidMeasurement(format!(
                "effect {i} is not Hermitian (deviation {herm:.3e})"
            )));
        }
        let min = e.min_eigenvalue();
        if min < -VALIDATION_TOL {
            return Err(Error::InvalidMeasurement(format!(
                "effect {i} has negative eigenvalue {min:.3e}"
            )));
        }
        sum = &sum + e;
    }
    let dev = sum.max_abs_diff(&CMatrix::identity(dim));
    if dev > VALIDATION_TOL {
        return Err(Error::InvalidMeasurement(format!(
            "effects sum to identity only within {dev:.3e}"
        )));
    }
    Ok(())
}

/// Unit vector helper for explicit bases.
pub fn unit(v: &[Complex64]) -> CVector {
    normalized(v)
}

/// Computational basis vector `|k⟩`.
pub fn ket(dim: usize, k: usize) -> CVector {
    let mut v = vec![ZERO; dim];
    v[k] = ONE;
    v
}
