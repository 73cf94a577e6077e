//! Simulation and certification of randomness generated by measurement-induced
//! state collapse in a prepare-and-measure protocol.
//!
//! A state `ρ` is sent either to a reference measurement B (upper path) or
//! through the randomness-generating measurement A and then B (lower path).
//! The change in B's statistics, the disturbance, lower-bounds the
//! randomness of A's outcomes.
//!
//! - [`quantum`]: states, measurements, channels, distances and entropies.
//! - [`protocol`]: Monte Carlo runs, noise models and seed accounting.
//! - [`certifier`]: lower bounds on min-entropy from the disturbance.
//! - [`oracle`]: brute-force ground truth and inequality verification.
//! - [`cli`]: configuration and the command-line subcommands.

pub mod certifier;
pub mod cli;
pub mod error;
pub mod oracle;
pub mod protocol;
pub mod quantum;

pub use error::{Error, Result};
