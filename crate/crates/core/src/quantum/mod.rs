//! Dense operator arithmetic, measurement channels, distances and entropies
//! for Hilbert-space dimensions 2 through 8.

mod channels;
mod distribution;
pub mod matrix;
mod measurement;
mod measures;
mod state;

pub use channels::{
    dephase, effect_roots, lueders_channel, operator_sqrt, outcome_distribution,
    realized_instrument, sum_conjugations,
};
pub use distribution::Distribution;
pub use matrix::{CMatrix, CVector, HermitianEigen};
pub use measurement::{ket, unit, Measurement, MeasurementKind};
pub use measures::{
    collision_entropy, collision_uncertainty, kl_divergence, overlap_factor, overlap_matrix,
    relative_entropy, relative_entropy_to_dephased, renyi_half_entropy, shannon_entropy,
    trace_distance, tv_distance, von_neumann_entropy, OverlapMatrix,
};
pub use state::DensityMatrix;

pub(crate) use channels::validate_unitaries;

use crate::error::{Error, Result};

/// Tolerance for validating operator invariants.
pub const VALIDATION_TOL: f64 = 1e-9;
/// Tolerance for contracts on computed results.
pub const RESULT_TOL: f64 = 1e-8;

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 8;

fn check_dim(dim: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(a, b))
    }
}

/// Pauli X.
pub fn pauli_x() -> CMatrix {
    use matrix::{ONE, ZERO};
    CMatrix::from_row_major(vec![ZERO, ONE, ONE, ZERO]).expect("2x2")
}
