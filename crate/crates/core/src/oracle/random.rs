//! Seeded random instances: Haar states and unitaries, mixed states, and
//! random measurements of each kind.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::quantum::matrix::{inner, norm, CMatrix, CVector};
use crate::quantum::{DensityMatrix, Measurement, MeasurementKind, MAX_DIM, MIN_DIM};

/// Generator for item `index` of a run keyed by `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVector {
    (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

/// Haar-random unit vector (normalized complex Gaussian).
pub fn haar_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVector {
    loop {
        let v = gaussian_vector(rng, dim);
        let n = norm(&v);
        if n > 1e-12 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// Haar-random unitary: Gram–Schmidt on complex Gaussian columns.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let mut cols: Vec<CVector> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v = gaussian_vector(rng, dim);
        // two passes keep the columns orthogonal to rounding level
        for _ in 0..2 {
            for u in &cols {
                let ov = inner(u, &v);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= ov * ui;
                }
            }
        }
        let n = norm(&v);
        if n > 1e-10 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    CMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// Uniform point on the probability simplex via sorted-uniform spacings.
pub fn simplex_weights<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut cuts: Vec<f64> = (0..n.saturating_sub(1)).map(|_| rng.random::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(n);
    let mut prev = 0.0;
    for c in cuts {
        out.push(c - prev);
        prev = c;
    }
    out.push(1.0 - prev);
    out
}

fn check_dim(dim: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

/// Mixture of `rank` Haar pure states with uniform-simplex weights
/// (a Haar pure state when `rank == 1`).
pub fn random_state_with<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> Result<DensityMatrix> {
    check_dim(dim)?;
    if rank == 0 || rank > dim {
        return Err(Error::InvalidArgument(format!("rank {rank} not in 1..={dim}")));
    }
    if rank == 1 {
        return DensityMatrix::pure(&haar_vector(rng, dim));
    }
    let weights = simplex_weights(rng, rank);
    let mut op = CMatrix::zeros(dim);
    for w in weights {
        let v = haar_vector(rng, dim);
        op = &op + &CMatrix::projector(&v).scale_real(w);
    }
    DensityMatrix::new(op)
}

pub fn random_state(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_state_with(&mut stream_rng(seed, 0), dim, rank)
}

pub fn random_measurement_with<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    outcomes: usize,
    kind: MeasurementKind,
) -> Result<Measurement> {
    check_dim(dim)?;
    match kind {
        MeasurementKind::RankOneProjective => {
            if outcomes != dim {
                return Err(Error::InvalidArgument(format!(
                    "a rank-one projective measurement in dimension {dim} has {dim} outcomes, not {outcomes}"
                )));
            }
            Measurement::from_unitary_columns(&haar_unitary(rng, dim))
        }
        MeasurementKind::Projective => {
            if outcomes == 0 || outcomes > dim {
                return Err(Error::InvalidArgument(format!(
                    "projective measurement needs 1..={dim} outcomes, got {outcomes}"
                )));
            }
            let u = haar_unitary(rng, dim);
            // every outcome gets at least one basis column
            let mut labels: Vec<usize> = (0..outcomes).collect();
            labels.extend((outcomes..dim).map(|_| rng.random_range(0..outcomes)));
            let mut effects = vec![CMatrix::zeros(dim); outcomes];
            for (col, &label) in labels.iter().enumerate() {
                effects[label] = &effects[label] + &CMatrix::projector(&u.column(col));
            }
            Measurement::projective(effects)
        }
        MeasurementKind::GeneralPovm => {
            if outcomes == 0 {
                return Err(Error::InvalidArgument("POVM needs at least one outcome".into()));
            }
            let grams: Vec<CMatrix> = (0..outcomes)
                .map(|_| {
                    let g = CMatrix::from_fn(dim, |_, _| {
                        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
                    });
                    &g * &g.adjoint()
                })
                .collect();
            let mut total = CMatrix::zeros(dim);
            for g in &grams {
                total = &total + g;
            }
            let inv_sqrt = total.hermitian_eigen().map_values(|x| 1.0 / x.sqrt());
            let mut effects: Vec<CMatrix> = grams
                .iter()
                .map(|g| inv_sqrt.conjugate(g).hermitian_part())
                .collect();
            // absorb the residual so the sum is the identity to rounding level
            let mut sum = CMatrix::zeros(dim);
            for e in &effects {
                sum = &sum + e;
            }
            let residual = &CMatrix::identity(dim) - &sum;
            let last = effects.len() - 1;
            effects[last] = &effects[last] + &residual;
            Measurement::general(effects)
        }
    }
}

pub fn random_measurement(
    dim: usize,
    outcomes: usize,
    kind: MeasurementKind,
    seed: u64,
) -> Result<Measurement> {
    random_measurement_with(&mut stream_rng(seed, 0), dim, outcomes, kind)
}
