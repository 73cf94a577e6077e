//! Certified randomness lower bounds from measured disturbance, with noise
//! corrections, the uncertainty-relation baseline, and figure sweeps.

mod bounds;
mod sweep;

pub use bounds::{
    adjust_disturbance, bound_theorem1, bound_theorem2, bound_theorem3, bound_theorem4,
    bound_theorem5, bound_uncertainty_baseline, certify, modified_disturbance, CertBound,
    CertInput, CertReport, NoiseParams, Theorem, TrustLevel, DOMAIN_TOL,
};
pub use sweep::{
    figure2_grid, figure3_exact, figure3_grid, sweep_figure2, sweep_figure3, theorem3_edge,
    Figure2Row, Figure3Row,
};
