//! Monte Carlo simulation of the prepare-and-measure protocol: instruments
//! and noise, path switching, finite-sample statistics, and the seed ledger.

mod instrument;
mod seed;
mod sim;

pub use instrument::{
    amplitude_damping_kraus, apply_real_instrument, depolarizing_kraus, InstrumentSpec,
    Realization, TestMeasurementSpec,
};
pub use seed::{binomial, default_upper_count, seed_cost, SeedLedger};
pub use sim::{
    analytic_statistics, empirical_epsilons, run_protocol, EmpiricalStats, Scenario,
    MAX_RAW_OUTCOMES,
};
