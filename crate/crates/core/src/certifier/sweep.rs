use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;

use super::bounds::{
    bound_theorem1, bound_theorem2, bound_theorem3, bound_uncertainty_baseline,
    modified_disturbance, DOMAIN_TOL,
};
use crate::error::{Error, Result};
use crate::quantum::{kl_divergence, overlap_factor, Distribution, OverlapMatrix};

/// One row of the disturbance sweep; `None` outside a bound's domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure2Row {
    pub d: f64,
    pub thm1: Option<f64>,
    pub thm2: Option<f64>,
    pub thm3: Option<f64>,
}

fn check_overlap(c: f64) -> Result<()> {
    if c > 0.5 && c < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("overlap {c} is not in (1/2, 1)")))
    }
}

/// Grid point where T3 reaches its domain edge, `δ_AB / (2√2)`.
pub fn theorem3_edge(c00: f64) -> Result<f64> {
    check_overlap(c00)?;
    Ok(overlap_factor(&OverlapMatrix::qubit(c00)?) / (2.0 * SQRT_2))
}

/// `steps + 1` uniform points on `[0, √2/2]`; for `steps ≥ 2` the domain
/// edges of T2 and T3 are inserted as well.
pub fn figure2_grid(c00: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    let hi = SQRT_2 / 2.0;
    let mut grid: Vec<f64> = (0..=steps).map(|k| hi * k as f64 / steps as f64).collect();
    if steps >= 2 {
        grid.push(0.5);
        grid.push(theorem3_edge(c00)?);
        grid.sort_by(f64::total_cmp);
        grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    }
    Ok(grid)
}

pub fn sweep_figure2(c00: f64, d_grid: &[f64]) -> Result<Vec<Figure2Row>> {
    check_overlap(c00)?;
    let delta = overlap_factor(&OverlapMatrix::qubit(c00)?);
    d_grid
        .iter()
        .map(|&d| {
            if !(d.is_finite() && d >= 0.0) {
                return Err(Error::InvalidArgument(format!("grid value {d}")));
            }
            let tau = modified_disturbance(d, delta)?;
            Ok(Figure2Row {
                d,
                thm1: bound_theorem1(d).ok().map(|b| b.bits),
                thm2: bound_theorem2(d).ok().map(|b| b.bits),
                thm3: bound_theorem3(tau).ok().map(|b| b.bits),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure3Row {
    pub q0: f64,
    pub baseline: f64,
    pub kl_min: f64,
    pub kl_max: f64,
}

/// `q0` values on a uniform grid of `steps + 1` points over `[0, 1]`.
pub fn figure3_grid(steps: usize) -> Result<Vec<Distribution>> {
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    (0..=steps)
        .map(|k| {
            let q0 = k as f64 / steps as f64;
            Distribution::new(vec![q0, 1.0 - q0])
        })
        .collect()
}

/// Qubit with A = σz and B the basis at angle `θ` from it,
/// `cos²(θ/2) = c`. Bloch vectors with B-statistics `q` lie on the slice
/// `r = s n + t m + u ŷ` with `s = 2q0 − 1`, `t² + u² ≤ 1 − s²`.
struct Slice {
    s: f64,
    radius: f64,
    cos_t: f64,
    sin_t: f64,
    contrast: f64,
    q: Distribution,
}

impl Slice {
    fn new(c: f64, q: &Distribution) -> Self {
        let theta = 2.0 * c.sqrt().acos();
        let s = 2.0 * q.probs()[0] - 1.0;
        Slice {
            s,
            radius: (1.0 - s * s).max(0.0).sqrt(),
            cos_t: theta.cos(),
            sin_t: theta.sin(),
            contrast: 2.0 * c - 1.0,
            q: q.clone(),
        }
    }

    /// `KL(q‖q')` at slice coordinates `(ρ, φ)`, `t = ρ cos φ`.
    fn kl(&self, rho: f64, phi: f64) -> f64 {
        let t = rho * phi.cos();
        // n = (sin θ, 0, cos θ), m = (cos θ, 0, −sin θ)
        let rz = self.s * self.cos_t - t * self.sin_t;
        // q'0 = c p0 + (1 − c)(1 − p0) with p0 = (1 + r_z)/2
        let q0 = (0.5 * (1.0 + self.contrast * rz)).clamp(0.0, 1.0);
        let qp = Distribution::new(vec![q0, 1.0 - q0]).expect("binary distribution");
        kl_divergence(&self.q, &qp).expect("equal lengths")
    }
}

/// Golden-section search for the extremum of `f` on `[lo, hi]`.
fn golden<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, maximize: bool) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let better = |a: f64, b: f64| if maximize { a > b } else { a < b };
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..60 {
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

/// Restart search over both the pure-state circle and the full disc.
/// Start points follow an additive low-discrepancy sequence; each is refined
/// by coordinate golden-section steps.
fn search(slice: &Slice, budget: usize, maximize: bool) -> f64 {
    let pick = |a: f64, b: f64| if maximize { a.max(b) } else { a.min(b) };
    let r = slice.radius;
    let mut best = slice.kl(0.0, 0.0);
    let (g1, g2) = (0.754_877_666_246_692_8, 0.569_840_290_998_053_3);
    for k in 0..budget {
        let phi0 = 2.0 * PI * (0.5 + g1 * k as f64).fract();
        let rho0 = r * (0.5 + g2 * k as f64).fract().sqrt();

        // pure-state branch: |r| = 1
        let phi = golden(|x| slice.kl(r, x), phi0 - PI / 2.0, phi0 + PI / 2.0, maximize);
        best = pick(best, pick(slice.kl(r, phi0), slice.kl(r, phi)));

        // mixed branch
        let mut rho = rho0;
        let mut phi = phi0;
        for _ in 0..2 {
            rho = golden(|x| slice.kl(x, phi), 0.0, r, maximize);
            phi = golden(|x| slice.kl(rho, x), phi - PI / 2.0, phi + PI / 2.0, maximize);
        }
        best = pick(best, pick(slice.kl(rho0, phi0), slice.kl(rho, phi)));
    }
    best
}

/// For each `q`, extremes of `KL(q‖q')` over qubit states with B-statistics
/// `q`, found by a `budget`-restart search, plus the uncertainty baseline.
pub fn sweep_figure3(c: f64, q_grid: &[Distribution], search_budget: usize) -> Result<Vec<Figure3Row>> {
    check_overlap(c)?;
    if search_budget == 0 {
        return Err(Error::InvalidArgument("search budget must be at least 1".into()));
    }
    for q in q_grid {
        if q.len() != 2 {
            return Err(Error::InvalidDistribution(format!(
                "expected a binary distribution, got {} outcomes",
                q.len()
            )));
        }
    }
    q_grid
        .par_iter()
        .map(|q| {
            let slice = Slice::new(c, q);
            let baseline = bound_uncertainty_baseline(c, q)?.bits;
            Ok(Figure3Row {
                q0: q.probs()[0],
                baseline,
                kl_min: search(&slice, search_budget, false),
                kl_max: search(&slice, search_budget, true),
            })
        })
        .collect()
}

/// Exact extremes of `KL(q‖q')` on the slice. `KL` depends on the state only
/// through `r_z`, which ranges over `s cos θ ± sin θ √(1 − s²)`; the minimum
/// is zero when `q' = q` is reachable, otherwise at the nearer endpoint.
pub fn figure3_exact(c: f64, q: &Distribution) -> Result<(f64, f64)> {
    check_overlap(c)?;
    if q.len() != 2 {
        return Err(Error::InvalidDistribution("expected a binary distribution".into()));
    }
    let slice = Slice::new(c, q);
    let ends = [slice.kl(slice.radius, 0.0), slice.kl(slice.radius, PI)];
    let lo = slice.s * slice.cos_t - slice.sin_t * slice.radius;
    let hi = slice.s * slice.cos_t + slice.sin_t * slice.radius;
    let target = slice.s / slice.contrast;
    let min = if target >= lo - DOMAIN_TOL && target <= hi + DOMAIN_TOL {
        0.0
    } else {
        ends[0].min(ends[1])
    };
    Ok((min, ends[0].max(ends[1])))
}
