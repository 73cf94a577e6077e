//! Distances, entropies and basis overlaps. All logarithms are base 2.

use super::channels::dephase;
use super::matrix::inner;
use super::{same_dim, DensityMatrix, Distribution, Measurement, VALIDATION_TOL};
use crate::error::{Error, Result};

/// Eigenvalues below this are exact zeros in entropy formulas.
const ZERO_EIGENVALUE: f64 = 1e-12;

/// `½ tr|a − b|`
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    same_dim(a.dim(), b.dim())?;
    let diff = a.op() - b.op();
    let eig = diff.hermitian_eigen();
    Ok((0.5 * eig.values.iter().map(|x| x.abs()).sum::<f64>()).min(1.0))
}

/// Total-variation distance `½ Σ_j |q_j − q2_j|`.
pub fn tv_distance(q: &Distribution, q2: &Distribution) -> Result<f64> {
    q.same_len(q2)?;
    Ok(0.5
        * q.probs()
            .iter()
            .zip(q2.probs())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>())
}

fn plogp(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        p * p.log2()
    }
}

pub fn shannon_entropy(p: &Distribution) -> f64 {
    (0.0 - p.probs().iter().map(|&x| plogp(x)).sum::<f64>()).max(0.0)
}

/// `δ = √(1 − Σ p_i²)`
pub fn collision_uncertainty(p: &Distribution) -> f64 {
    (1.0 - p.probs().iter().map(|x| x * x).sum::<f64>()).max(0.0).sqrt()
}

/// Rényi-2 entropy expressed through the collision uncertainty,
/// `H₂ = −log2(1 − δ²)`.
pub fn collision_entropy(p: &Distribution) -> f64 {
    let delta = collision_uncertainty(p);
    -(1.0 - delta * delta).log2()
}

/// `H_{1/2}(q) = 2 log2 Σ_j √q_j`
pub fn renyi_half_entropy(q: &Distribution) -> f64 {
    2.0 * q.probs().iter().map(|x| x.sqrt()).sum::<f64>().log2()
}

/// `Σ_j q_j log2(q_j / q2_j)`; `+∞` when `q` puts weight where `q2` has none.
pub fn kl_divergence(q: &Distribution, q2: &Distribution) -> Result<f64> {
    q.same_len(q2)?;
    let mut acc = 0.0;
    for (&a, &b) in q.probs().iter().zip(q2.probs()) {
        if a <= 0.0 {
            continue;
        }
        if b <= 0.0 {
            return Ok(f64::INFINITY);
        }
        acc += a * (a / b).log2();
    }
    Ok(acc.max(0.0))
}

/// Von Neumann entropy `−tr ρ log2 ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    -rho.eigenvalues()
        .into_iter()
        .filter(|&x| x > ZERO_EIGENVALUE)
        .map(plogp)
        .sum::<f64>()
}

/// Quantum relative entropy `tr ρ (log2 ρ − log2 σ)`.
///
/// Fails when the support of `ρ` is not contained in that of `σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho.dim(), sigma.dim())?;
    let neg_entropy: f64 = rho
        .eigenvalues()
        .into_iter()
        .filter(|&x| x > ZERO_EIGENVALUE)
        .map(plogp)
        .sum();
    let eig = sigma.op().hermitian_eigen();
    let mut cross = 0.0;
    for (k, &mu) in eig.values.iter().enumerate() {
        let v = eig.vectors.column(k);
        let weight = inner(&v, &rho.op().apply(&v)).re;
        if mu > ZERO_EIGENVALUE {
            cross += weight * mu.log2();
        } else if weight > VALIDATION_TOL {
            return Err(Error::InvalidArgument(format!(
                "support not contained: weight {weight:.3e} on null eigenvector"
            )));
        }
    }
    Ok((neg_entropy - cross).max(0.0))
}

/// `S(ρ‖Δ(ρ))` with `Δ` the dephasing in the basis of `basis`.
pub fn relative_entropy_to_dephased(rho: &DensityMatrix, basis: &Measurement) -> Result<f64> {
    let dephased = dephase(basis, rho)?;
    relative_entropy(rho, &dephased)
}

/// Squared overlaps `c_ij = |⟨a_i|b_j⟩|²` between two orthonormal bases.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapMatrix {
    rows: Vec<Vec<f64>>,
}

impl OverlapMatrix {
    /// Accepts any doubly stochastic matrix (rows and columns summing to 1).
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("overlap matrix must be square".into()));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.iter().any(|&x| !(-VALIDATION_TOL..=1.0 + VALIDATION_TOL).contains(&x)) {
                return Err(Error::InvalidArgument(format!("row {i} has entries outside [0,1]")));
            }
            let s: f64 = r.iter().sum();
            if (s - 1.0).abs() > VALIDATION_TOL {
                return Err(Error::InvalidArgument(format!("row {i} sums to {s}")));
            }
        }
        for j in 0..n {
            let s: f64 = rows.iter().map(|r| r[j]).sum();
            if (s - 1.0).abs() > VALIDATION_TOL {
                return Err(Error::InvalidArgument(format!("column {j} sums to {s}")));
            }
        }
        Ok(OverlapMatrix { rows })
    }

    /// The 2×2 overlap matrix `[[c, 1−c], [1−c, c]]`.
    pub fn qubit(c00: f64) -> Result<Self> {
        Self::new(vec![vec![c00, 1.0 - c00], vec![1.0 - c00, c00]])
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i][j]
    }

    /// `max_ij c_ij`
    pub fn max_overlap(&self) -> f64 {
        self.rows
            .iter()
            .flatten()
            .copied()
            .fold(0.0, f64::max)
    }

    /// Maps A-statistics `p` to the B-statistics of the dephased state,
    /// `q'_j = Σ_i c_ij p_i`.
    pub fn push_forward(&self, p: &Distribution) -> Result<Distribution> {
        if p.len() != self.dim() {
            return Err(Error::CountMismatch {
                expected: self.dim(),
                got: p.len(),
            });
        }
        let n = self.dim();
        Distribution::from_born(
            (0..n)
                .map(|j| (0..n).map(|i| self.rows[i][j] * p.probs()[i]).sum())
                .collect(),
        )
    }
}

pub fn overlap_matrix(a: &Measurement, b: &Measurement) -> Result<OverlapMatrix> {
    let va = a.require_rank_one()?;
    let vb = b.require_rank_one()?;
    same_dim(a.dim(), b.dim())?;
    OverlapMatrix::new(
        va.iter()
            .map(|ai| vb.iter().map(|bj| inner(ai, bj).norm_sqr()).collect())
            .collect(),
    )
}

/// `δ_{A:B} = Σ_j √(1 − Σ_i c_ij²)`
pub fn overlap_factor(c: &OverlapMatrix) -> f64 {
    let n = c.dim();
    (0..n)
        .map(|j| {
            let s: f64 = (0..n).map(|i| c.get(i, j).powi(2)).sum();
            (1.0 - s).max(0.0).sqrt()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn dist(v: &[f64]) -> Distribution {
        Distribution::new(v.to_vec()).unwrap()
    }

    #[test]
    fn trace_distance_examples() {
        let (z, o) = (DensityMatrix::zero(), DensityMatrix::one());
        assert_abs_diff_eq!(trace_distance(&z, &o).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(trace_distance(&z, &z).unwrap(), 0.0, epsilon = 1e-15);
        let half = DensityMatrix::maximally_mixed(2).unwrap();
        assert_abs_diff_eq!(trace_distance(&DensityMatrix::plus(), &half).unwrap(), 0.5, epsilon = 1e-14);
        assert!(trace_distance(&z, &DensityMatrix::maximally_mixed(3).unwrap()).is_err());
    }

    #[test]
    fn tv_examples() {
        assert_abs_diff_eq!(tv_distance(&dist(&[1.0, 0.0]), &dist(&[0.5, 0.5])).unwrap(), 0.5);
        assert_abs_diff_eq!(tv_distance(&dist(&[0.3, 0.7]), &dist(&[0.3, 0.7])).unwrap(), 0.0);
        assert_abs_diff_eq!(tv_distance(&dist(&[1.0, 0.0]), &dist(&[0.0, 1.0])).unwrap(), 1.0);
        assert!(tv_distance(&dist(&[1.0]), &dist(&[0.5, 0.5])).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert_abs_diff_eq!(shannon_entropy(&dist(&[0.5, 0.5])), 1.0);
        assert_abs_diff_eq!(shannon_entropy(&dist(&[1.0, 0.0])), 0.0);
        assert_abs_diff_eq!(shannon_entropy(&dist(&[0.75, 0.25])), 0.811278, epsilon = 1e-6);

        assert_abs_diff_eq!(collision_uncertainty(&dist(&[0.5, 0.5])), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(collision_uncertainty(&dist(&[1.0, 0.0])), 0.0);
        assert_abs_diff_eq!(collision_uncertainty(&dist(&[0.9, 0.1])), 0.424264, epsilon = 1e-6);
        assert_abs_diff_eq!(collision_entropy(&dist(&[0.5, 0.5])), 1.0, epsilon = 1e-12);

        assert_abs_diff_eq!(renyi_half_entropy(&dist(&[1.0, 0.0])), 0.0);
        assert_abs_diff_eq!(renyi_half_entropy(&dist(&[0.5, 0.5])), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(renyi_half_entropy(&dist(&[0.75, 0.25])), 0.899969, epsilon = 1e-6);
    }

    #[test]
    fn kl_examples() {
        assert_abs_diff_eq!(kl_divergence(&dist(&[1.0, 0.0]), &dist(&[0.5, 0.5])).unwrap(), 1.0);
        assert_abs_diff_eq!(kl_divergence(&dist(&[0.2, 0.8]), &dist(&[0.2, 0.8])).unwrap(), 0.0);
        assert_eq!(
            kl_divergence(&dist(&[1.0, 0.0]), &dist(&[0.0, 1.0])).unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn relative_entropy_examples() {
        let z = Measurement::sigma_z();
        assert_abs_diff_eq!(
            relative_entropy_to_dephased(&DensityMatrix::plus(), &z).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        let diag = DensityMatrix::from_bloch([0.0, 0.0, -0.3]).unwrap();
        assert_abs_diff_eq!(relative_entropy_to_dephased(&diag, &z).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            relative_entropy_to_dephased(&DensityMatrix::zero(), &z).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn relative_entropy_detects_support_violation() {
        assert!(relative_entropy(&DensityMatrix::plus(), &DensityMatrix::zero()).is_err());
    }

    #[test]
    fn overlap_examples() {
        let (z, x) = (Measurement::sigma_z(), Measurement::sigma_x());
        let id = overlap_matrix(&z, &z).unwrap();
        assert_eq!(id.rows(), &[vec![1.0, 0.0], vec![0.0, 1.0]]);
        let zx = overlap_matrix(&z, &x).unwrap();
        for r in zx.rows() {
            for &v in r {
                assert_abs_diff_eq!(v, 0.5, epsilon = 1e-15);
            }
        }
        let theta = 2.0 * 0.75f64.sqrt().acos();
        let rot = overlap_matrix(&z, &Measurement::qubit_angle(theta)).unwrap();
        assert_abs_diff_eq!(rot.get(0, 0), 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(rot.get(0, 1), 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(rot.get(1, 0), 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(rot.get(1, 1), 0.75, epsilon = 1e-12);
    }

    #[test]
    fn overlap_factor_examples() {
        assert_abs_diff_eq!(overlap_factor(&OverlapMatrix::qubit(0.5).unwrap()), 2f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(overlap_factor(&OverlapMatrix::qubit(1.0).unwrap()), 0.0);
        assert_abs_diff_eq!(overlap_factor(&OverlapMatrix::qubit(0.75).unwrap()), 1.224745, epsilon = 1e-6);
        for c in [0.55f64, 0.62, 0.8, 0.99] {
            let closed = 2.0 * (2.0 * c * (1.0 - c)).sqrt();
            assert_abs_diff_eq!(overlap_factor(&OverlapMatrix::qubit(c).unwrap()), closed, epsilon = 1e-12);
        }
    }

    #[test]
    fn overlap_requires_rank_one() {
        let half = crate::quantum::CMatrix::identity(2).scale_real(0.5);
        let m = Measurement::general(vec![half.clone(), half]).unwrap();
        assert!(overlap_matrix(&m, &Measurement::sigma_z()).is_err());
        assert!(OverlapMatrix::new(vec![vec![0.9, 0.1], vec![0.2, 0.8]]).is_err());
    }
}
