//! Measurement-induced state updates.

use super::matrix::CMatrix;
use super::{same_dim, Distribution, DensityMatrix, Measurement, VALIDATION_TOL};
use crate::error::{Error, Result};

/// Born-rule outcome probabilities `tr(ρ M_i)`.
pub fn outcome_distribution(m: &Measurement, rho: &DensityMatrix) -> Result<Distribution> {
    same_dim(m.dim(), rho.dim())?;
    Distribution::from_born(
        m.effects()
            .iter()
            .map(|e| rho.op().trace_product(e).re)
            .collect(),
    )
}

/// Principal square root of a Hermitian positive semidefinite operator.
///
/// Eigenvalues in `[−1e-9, 0)` are clamped to zero.
pub fn operator_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let herm = m.hermiticity_error();
    if herm > VALIDATION_TOL {
        return Err(Error::NotHermitian(herm));
    }
    let eig = m.hermitian_eigen();
    if eig.values[0] < -VALIDATION_TOL {
        return Err(Error::NotPsd(eig.values[0]));
    }
    Ok(eig.map_values(|x| x.max(0.0).sqrt()))
}

/// `√M_i` for every effect of `m`.
pub fn effect_roots(m: &Measurement) -> Result<Vec<CMatrix>> {
    m.effects().iter().map(operator_sqrt).collect()
}

/// Lüders update `ρ ↦ Σ_i √M_i ρ √M_i`.
pub fn lueders_channel(m: &Measurement, rho: &DensityMatrix) -> Result<DensityMatrix> {
    same_dim(m.dim(), rho.dim())?;
    let roots = effect_roots(m)?;
    Ok(DensityMatrix::from_channel_output(sum_conjugations(
        &roots,
        rho.op(),
    )))
}

/// Update realized with a unitary correction per outcome:
/// `ρ ↦ Σ_i U_i √M_i ρ √M_i U_i†`.
pub fn realized_instrument(
    m: &Measurement,
    unitaries: &[CMatrix],
    rho: &DensityMatrix,
) -> Result<DensityMatrix> {
    same_dim(m.dim(), rho.dim())?;
    validate_unitaries(m, unitaries)?;
    let roots = effect_roots(m)?;
    let kraus: Vec<CMatrix> = unitaries.iter().zip(&roots).map(|(u, r)| u * r).collect();
    Ok(DensityMatrix::from_channel_output(sum_conjugations(
        &kraus,
        rho.op(),
    )))
}

pub(crate) fn validate_unitaries(m: &Measurement, unitaries: &[CMatrix]) -> Result<()> {
    if unitaries.len() != m.outcomes() {
        return Err(Error::CountMismatch {
            expected: m.outcomes(),
            got: unitaries.len(),
        });
    }
    for u in unitaries {
        same_dim(m.dim(), u.dim())?;
        let err = u.unitarity_error();
        if err > VALIDATION_TOL {
            return Err(Error::NotUnitary(err));
        }
    }
    Ok(())
}

/// Removes coherences in the basis of a rank-one projective measurement.
pub fn dephase(basis: &Measurement, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let vectors = basis.require_rank_one()?;
    same_dim(basis.dim(), rho.dim())?;
    let mut out = CMatrix::zeros(rho.dim());
    for (b, e) in vectors.iter().zip(basis.effects()) {
        let w = super::matrix::inner(b, &rho.op().apply(b)).re;
        out = &out + &e.scale_real(w);
    }
    Ok(DensityMatrix::from_channel_output(out))
}

/// `Σ_k K_k ρ K_k†`
pub fn sum_conjugations(kraus: &[CMatrix], rho: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(rho.dim());
    for k in kraus {
        out = &out + &k.conjugate(rho);
    }
    out
}
