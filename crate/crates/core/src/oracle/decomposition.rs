use std::f64::consts::PI;

use num_complex::Complex64;

use super::random::{haar_unitary, stream_rng};
use crate::error::{Error, Result};
use crate::quantum::matrix::{CMatrix, CVector};
use crate::quantum::{shannon_entropy, DensityMatrix, Distribution, Measurement};

/// Eigenvalues below this are treated as outside the support.
const SUPPORT_TOL: f64 = 1e-12;
const GRID_ANGLES: usize = 181;
const GRID_PHASES: usize = 24;

/// Pure-state decomposition `ρ = Σ_n w_n |φ_n⟩⟨φ_n|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub weights: Distribution,
    pub states: Vec<CVector>,
}

impl Decomposition {
    pub fn reconstruct(&self) -> CMatrix {
        let dim = self.states.first().map_or(0, Vec::len);
        let mut out = CMatrix::zeros(dim);
        for (w, s) in self.weights.probs().iter().zip(&self.states) {
            out = &out + &CMatrix::projector(s).scale_real(*w);
        }
        out
    }

    /// `Σ_n w_n f(p_n)` with `p_n` the outcome statistics of `a` on `φ_n`.
    pub fn average<F: Fn(&[f64]) -> f64>(&self, a: &Measurement, f: F) -> f64 {
        self.weights
            .probs()
            .iter()
            .zip(&self.states)
            .map(|(w, s)| w * f(&pure_statistics(a, s)))
            .sum()
    }
}

/// `⟨φ|M_i|φ⟩` for each effect.
pub fn pure_statistics(a: &Measurement, phi: &[Complex64]) -> Vec<f64> {
    a.effects()
        .iter()
        .map(|e| crate::quantum::matrix::inner(phi, &e.apply(phi)).re.max(0.0))
        .collect()
}

/// Whether an estimate is exact or which side of the true value it lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bias {
    Exact,
    LowerBound,
    UpperBound,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub value: f64,
    pub bias: Bias,
}

/// Scaled eigenvectors `√λ_k e_k` spanning the support of `ρ`.
fn support(rho: &DensityMatrix) -> Vec<CVector> {
    let eig = rho.op().hermitian_eigen();
    let dim = rho.dim();
    (0..dim)
        .rev()
        .filter(|&k| eig.values[k] > SUPPORT_TOL)
        .map(|k| {
            let s = eig.values[k].sqrt();
            (0..dim).map(|i| eig.vectors[(i, k)] * s).collect()
        })
        .collect()
}

/// Decomposition from the rows of an isometry `V` (`m × r`, orthonormal
/// columns): `φ̃_n = Σ_k V_nk √λ_k e_k`.
fn mix(support: &[CVector], v: impl Fn(usize, usize) -> Complex64, m: usize) -> Decomposition {
    let dim = support[0].len();
    let mut weights = Vec::with_capacity(m);
    let mut states = Vec::with_capacity(m);
    for n in 0..m {
        let mut phi = vec![Complex64::new(0.0, 0.0); dim];
        for (k, s) in support.iter().enumerate() {
            let c = v(n, k);
            for (p, x) in phi.iter_mut().zip(s) {
                *p += c * x;
            }
        }
        let w: f64 = phi.iter().map(Complex64::norm_sqr).sum();
        if w > 1e-15 {
            let norm = w.sqrt();
            states.push(phi.into_iter().map(|z| z / norm).collect());
            weights.push(w);
        }
    }
    let total: f64 = weights.iter().sum();
    let weights = Distribution::new(weights.into_iter().map(|w| w / total).collect())
        .expect("weights sum to the trace");
    Decomposition { weights, states }
}

/// The 2×2 mixing `[[cos α, e^{iβ} sin α], [−sin α, e^{iβ} cos α]]`.
fn rotation_mix(support: &[CVector], alpha: f64, beta: f64) -> Decomposition {
    let (s, c) = alpha.sin_cos();
    let ph = Complex64::from_polar(1.0, beta);
    let v = [
        [Complex64::new(c, 0.0), ph * s],
        [Complex64::new(-s, 0.0), ph * c],
    ];
    mix(support, |n, k| v[n][k], 2)
}

/// Calls `f` on the eigen-decomposition, then, for qubit rank-2 states, the
/// rotation grid, then `budget` Haar-random isometries with `r`, `r + 1` or
/// `r + 2` rows.
pub fn visit_decompositions<F: FnMut(&Decomposition)>(
    rho: &DensityMatrix,
    budget: usize,
    seed: u64,
    mut f: F,
) {
    let sup = support(rho);
    let r = sup.len();
    f(&mix(&sup, |n, k| if n == k { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }, r));
    if r == 1 {
        return;
    }
    if r == 2 && rho.dim() == 2 {
        for i in 0..GRID_ANGLES {
            let alpha = PI * i as f64 / (GRID_ANGLES - 1) as f64;
            for j in 0..GRID_PHASES {
                let beta = 2.0 * PI * j as f64 / GRID_PHASES as f64;
                f(&rotation_mix(&sup, alpha, beta));
            }
        }
    }
    let mut rng = stream_rng(seed, 0);
    for k in 0..budget {
        let m = r + k % 3;
        let u = haar_unitary(&mut rng, m);
        f(&mix(&sup, |n, j| u[(n, j)], m));
    }
}

pub fn decompositions_of(rho: &DensityMatrix, budget: usize, seed: u64) -> Result<Vec<Decomposition>> {
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    let mut out = Vec::new();
    visit_decompositions(rho, budget, seed, |d| out.push(d.clone()));
    Ok(out)
}

/// Best value of `objective` over the visited decompositions; for qubit
/// rank-2 states the best grid point is then polished by golden-section
/// steps in the rotation angles.
fn optimize<F: Fn(&Decomposition) -> f64>(
    rho: &DensityMatrix,
    budget: usize,
    seed: u64,
    maximize: bool,
    objective: F,
) -> f64 {
    let better = |a: f64, b: f64| if maximize { a > b } else { a < b };
    let mut best = if maximize { f64::NEG_INFINITY } else { f64::INFINITY };
    visit_decompositions(rho, budget, seed, |d| {
        let v = objective(d);
        if better(v, best) {
            best = v;
        }
    });
    let sup = support(rho);
    if sup.len() == 2 && rho.dim() == 2 {
        let step = PI / (GRID_ANGLES - 1) as f64;
        let phase_step = 2.0 * PI / GRID_PHASES as f64;
        // locate the best grid cell again, then refine around it
        let mut cell = (0.0, 0.0);
        let mut cell_val = if maximize { f64::NEG_INFINITY } else { f64::INFINITY };
        for i in 0..GRID_ANGLES {
            for j in 0..GRID_PHASES {
                let (a, b) = (step * i as f64, phase_step * j as f64);
                let v = objective(&rotation_mix(&sup, a, b));
                if better(v, cell_val) {
                    cell_val = v;
                    cell = (a, b);
                }
            }
        }
        let eval = |a: f64, b: f64| objective(&rotation_mix(&sup, a, b));
        let (mut a, mut b) = cell;
        for _ in 0..3 {
            a = golden(|x| eval(x, b), a - step, a + step, maximize);
            b = golden(|y| eval(a, y), b - phase_step, b + phase_step, maximize);
        }
        let v = eval(a, b);
        if better(v, best) {
            best = v;
        }
    }
    best
}

fn golden<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, maximize: bool) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let better = |a: f64, b: f64| if maximize { a > b } else { a < b };
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..50 {
        if better(f1, f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

fn max_prob(p: &[f64]) -> f64 {
    p.iter().copied().fold(0.0, f64::max)
}

fn check(rho: &DensityMatrix, a: &Measurement) -> Result<()> {
    if rho.dim() != a.dim() {
        return Err(Error::DimensionMismatch(a.dim(), rho.dim()));
    }
    Ok(())
}

fn is_pure(rho: &DensityMatrix) -> bool {
    support(rho).len() == 1
}

/// `G = max Σ_n w_n max_i p(i|φ_n)` over the searched decompositions. Exact
/// for pure states, otherwise a lower bound on the true value.
pub fn guessing_probability(
    rho: &DensityMatrix,
    a: &Measurement,
    budget: usize,
    seed: u64,
) -> Result<OracleEstimate> {
    check(rho, a)?;
    let value = optimize(rho, budget, seed, true, |d| d.average(a, max_prob)).min(1.0);
    let bias = if is_pure(rho) { Bias::Exact } else { Bias::LowerBound };
    Ok(OracleEstimate { value, bias })
}

/// `−log2 G`; an upper estimate for mixed states.
pub fn hmin_classical(rho: &DensityMatrix, a: &Measurement, budget: usize, seed: u64) -> Result<OracleEstimate> {
    let g = guessing_probability(rho, a, budget, seed)?;
    Ok(OracleEstimate {
        value: (-g.value.log2()).max(0.0),
        bias: match g.bias {
            Bias::Exact => Bias::Exact,
            _ => Bias::UpperBound,
        },
    })
}

/// `min Σ_n w_n H(p_{φ_n})` over the searched decompositions; an upper
/// estimate for mixed states.
pub fn hmin_asy_classical(
    rho: &DensityMatrix,
    a: &Measurement,
    budget: usize,
    seed: u64,
) -> Result<OracleEstimate> {
    check(rho, a)?;
    let entropy = |p: &[f64]| {
        let total: f64 = p.iter().sum();
        let p = Distribution::new(p.iter().map(|x| x / total).collect()).expect("normalized");
        shannon_entropy(&p)
    };
    let value = optimize(rho, budget, seed, false, |d| d.average(a, entropy)).max(0.0);
    let bias = if is_pure(rho) { Bias::Exact } else { Bias::UpperBound };
    Ok(OracleEstimate { value, bias })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::random::random_state;
    use crate::quantum::outcome_distribution;

    #[test]
    fn pure_state_has_trivial_decomposition() {
        let rho = DensityMatrix::plus();
        let all = decompositions_of(&rho, 10, 1).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].states.len(), 1);
    }

    #[test]
    fn decompositions_reconstruct() {
        for (dim, rank, seed) in [(2, 2, 1), (3, 2, 2), (4, 4, 3), (5, 3, 4)] {
            let rho = random_state(dim, rank, seed).unwrap();
            for d in decompositions_of(&rho, 30, seed).unwrap() {
                assert!(d.reconstruct().max_abs_diff(rho.op()) < 1e-8);
            }
        }
    }

    #[test]
    fn mixed_qubit_includes_both_canonical_bases() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        let all = decompositions_of(&rho, 1, 0).unwrap();
        let has = |m: &Measurement| {
            all.iter().any(|d| {
                d.states.len() == 2
                    && d.states.iter().all(|s| max_prob(&pure_statistics(m, s)) > 1.0 - 1e-12)
            })
        };
        assert!(has(&Measurement::sigma_z()));
        assert!(has(&Measurement::sigma_x()));
    }

    #[test]
    fn guessing_examples() {
        let z = Measurement::sigma_z();
        let g = guessing_probability(&DensityMatrix::plus(), &z, 10, 0).unwrap();
        assert!((g.value - 0.5).abs() < 1e-12);
        assert_eq!(g.bias, Bias::Exact);
        let g = guessing_probability(&DensityMatrix::maximally_mixed(2).unwrap(), &z, 10, 0).unwrap();
        assert!((g.value - 1.0).abs() < 1e-12);
        assert_eq!(g.bias, Bias::LowerBound);
        let g = guessing_probability(&DensityMatrix::zero(), &z, 10, 0).unwrap();
        assert_eq!(g.value, 1.0);
    }

    #[test]
    fn hmin_examples() {
        let z = Measurement::sigma_z();
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        assert!((hmin_classical(&DensityMatrix::plus(), &z, 10, 0).unwrap().value - 1.0).abs() < 1e-12);
        assert!(hmin_classical(&mixed, &z, 10, 0).unwrap().value.abs() < 1e-12);
        assert_eq!(hmin_classical(&DensityMatrix::zero(), &z, 10, 0).unwrap().value, 0.0);

        assert!(hmin_asy_classical(&mixed, &z, 10, 0).unwrap().value.abs() < 1e-12);
        assert!((hmin_asy_classical(&DensityMatrix::plus(), &z, 10, 0).unwrap().value - 1.0).abs() < 1e-12);
        let diag = DensityMatrix::from_bloch([0.0, 0.0, 0.4]).unwrap();
        assert!(hmin_asy_classical(&diag, &z, 10, 0).unwrap().value.abs() < 1e-12);
        let est = hmin_asy_classical(&diag, &z, 10, 0).unwrap();
        assert_eq!(est.bias, Bias::UpperBound);
    }

    /// Qubit closed form: `G = ½(1 + √(1 − |r⊥|²))`, `r⊥` the Bloch component
    /// orthogonal to the measurement axis.
    #[test]
    fn qubit_guessing_matches_closed_form() {
        let z = Measurement::sigma_z();
        for seed in 0..10 {
            let rho = random_state(2, 2, seed).unwrap();
            let [x, y, _] = rho.bloch().unwrap();
            let exact = 0.5 * (1.0 + (1.0 - x * x - y * y).sqrt());
            let g = guessing_probability(&rho, &z, 50, seed).unwrap().value;
            assert!(g <= exact + 1e-12 && g > exact - 1e-9, "{g} vs {exact}");
        }
    }

    #[test]
    fn asymptotic_estimate_is_below_shannon() {
        for seed in 0..10 {
            let rho = random_state(3, 2, seed).unwrap();
            let a = Measurement::computational(3).unwrap();
            let h = shannon_entropy(&outcome_distribution(&a, &rho).unwrap());
            assert!(hmin_asy_classical(&rho, &a, 20, seed).unwrap().value <= h + 1e-12);
        }
    }
}
