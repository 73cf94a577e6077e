//! Independent checks: random instances, guessing-probability estimates and
//! the bound-ordering and soundness verifications.

mod adversarial;
mod chains;
mod decomposition;
pub mod random;

pub use adversarial::{adversarial_realization_demo, state_change, AdversarialReport, DemoCase};
pub use chains::{
    chain_values, check_bound_orderings, check_soundness, verify_lemma_chains, Chain, ChainReport,
    ChainValues, LemmaReport, LinkStats, VIOLATION_TOL,
};
pub use decomposition::{
    decompositions_of, guessing_probability, hmin_asy_classical, hmin_classical,
    pure_statistics, visit_decompositions, Bias, Decomposition, OracleEstimate,
};
pub use random::{random_measurement, random_state};
