use num_complex::Complex64;

use super::matrix::{c, normalized, CMatrix, ONE, ZERO};
use super::{check_dim, VALIDATION_TOL};
use crate::error::{Error, Result};

/// A validated density operator: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: CMatrix,
}

impl DensityMatrix {
    pub fn new(op: CMatrix) -> Result<Self> {
        check_dim(op.dim())?;
        let herm = op.hermiticity_error();
        if herm > VALIDATION_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = op.trace();
        if (tr.re - 1.0).abs() > VALIDATION_TOL || tr.im.abs() > VALIDATION_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let min = op.min_eigenvalue();
        if min < -VALIDATION_TOL {
            return Err(Error::NotPsd(min));
        }
        Ok(DensityMatrix {
            op: op.hermitian_part(),
        })
    }

    /// Wraps an operator produced by a trace-preserving, positive map.
    pub(crate) fn from_channel_output(op: CMatrix) -> Self {
        debug_assert!(op.hermiticity_error() < 1e-8);
        debug_assert!((op.trace().re - 1.0).abs() < 1e-8);
        DensityMatrix {
            op: op.hermitian_part(),
        }
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        check_dim(psi.len())?;
        let n = super::matrix::norm(psi);
        if n < 1e-12 {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        Ok(DensityMatrix {
            op: CMatrix::projector(&normalized(psi)),
        })
    }

    /// Qubit state `(I + r·σ)/2`; requires `|r| ≤ 1`.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        if len > 1.0 + VALIDATION_TOL {
            return Err(Error::InvalidArgument(format!(
                "Bloch vector length {len} exceeds 1"
            )));
        }
        let op = CMatrix::from_row_major(vec![
            c((1.0 + r[2]) / 2.0, 0.0),
            c(r[0] / 2.0, -r[1] / 2.0),
            c(r[0] / 2.0, r[1] / 2.0),
            c((1.0 - r[2]) / 2.0, 0.0),
        ])?;
        Ok(DensityMatrix { op })
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(DensityMatrix {
            op: CMatrix::identity(dim).scale_real(1.0 / dim as f64),
        })
    }

    /// `|k⟩⟨k|` in the computational basis.
    pub fn basis_state(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::InvalidArgument(format!("basis index {k} >= {dim}")));
        }
        let mut v = vec![ZERO; dim];
        v[k] = ONE;
        Self::pure(&v)
    }

    pub fn zero() -> Self {
        Self::basis_state(2, 0).expect("qubit basis state")
    }

    pub fn one() -> Self {
        Self::basis_state(2, 1).expect("qubit basis state")
    }

    /// `|+⟩⟨+|`
    pub fn plus() -> Self {
        Self::from_bloch([1.0, 0.0, 0.0]).expect("unit Bloch vector")
    }

    /// `|−⟩⟨−|`
    pub fn minus() -> Self {
        Self::from_bloch([-1.0, 0.0, 0.0]).expect("unit Bloch vector")
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn op(&self) -> &CMatrix {
        &self.op
    }

    /// `tr(ρ²)`
    pub fn purity(&self) -> f64 {
        self.op.trace_product(&self.op).re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.op.hermitian_eigen().values
    }

    /// Bloch vector of a qubit state.
    pub fn bloch(&self) -> Result<[f64; 3]> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch(self.dim(), 2));
        }
        let off = self.op[(1, 0)];
        Ok([
            2.0 * off.re,
            2.0 * off.im,
            (self.op[(0, 0)] - self.op[(1, 1)]).re,
        ])
    }
}
