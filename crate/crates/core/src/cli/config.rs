//! JSON run configuration.
//!
//! ```json
//! {
//!   "state": "plus",
//!   "a": "sigmaz",
//!   "b": { "angle": 1.0471975511965976 },
//!   "realization": { "depolarizing": 0.02 },
//!   "b_real_effects": [["0.99", "0"], ["0", "0.01"]],
//!   "trust": "trusted",
//!   "eps_a": 0.02,
//!   "eps_b": 0.01,
//!   "n": 1000000,
//!   "seed": 42
//! }
//! ```
//!
//! States: `"plus"`, `"minus"`, `"zero"`, `"one"`, `"mixed:I/2"` (or
//! `"mixed"`), `{"bloch": [x, y, z]}`, `{"mixed": d}`, `{"matrix": M}`.
//! Measurements: `"sigmaz"`, `"sigmax"`, `"sigmay"`, `{"angle": θ}` (basis
//! `cos(θ/2)|0⟩ + sin(θ/2)|1⟩`), `{"computational": d}`, `{"effects": [M, …]}`.
//! Realizations: `"lueders"`, `{"unitaries": [M, …]}`, `{"kraus": [M, …]}`,
//! `{"depolarizing": λ}`, `{"amplitude_damping": γ}`.
//! A matrix `M` is a list of rows (or one row-major list) whose entries are
//! numbers or complex strings such as `"0.5-0.5j"`.

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::Value;

use super::CliError;
use crate::certifier::{NoiseParams, TrustLevel};
use crate::error::Error;
use crate::protocol::{default_upper_count, InstrumentSpec, Realization, Scenario, TestMeasurementSpec};
use crate::quantum::{CMatrix, DensityMatrix, Measurement};

pub const DEFAULT_N: u64 = 10_000;
pub const DEFAULT_BUDGET: usize = 1000;

/// Statistics a certification is computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    #[default]
    Analytic,
    Empirical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum TrustName {
    Untrusted,
    Projective,
    Trusted,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    state: Value,
    a: Value,
    b: Value,
    #[serde(default)]
    realization: Option<Value>,
    #[serde(default)]
    b_real_effects: Option<Vec<Value>>,
    #[serde(default)]
    trust: Option<TrustName>,
    #[serde(default)]
    eps_a: Option<f64>,
    #[serde(default)]
    eps_b: Option<f64>,
    #[serde(default)]
    n: Option<u64>,
    #[serde(default)]
    n_u: Option<u64>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    budget: Option<usize>,
    #[serde(default)]
    source: Option<Source>,
}

/// A fully validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub trust: TrustLevel,
    pub noise: NoiseParams,
    pub budget: usize,
    pub source: Source,
}

fn invalid(key: &str, message: impl Into<String>) -> CliError {
    CliError::Config {
        key: key.to_string(),
        message: message.into(),
    }
}

fn wrap(key: &str) -> impl Fn(Error) -> CliError + '_ {
    move |e| invalid(key, e.to_string())
}

fn parse_entry(key: &str, v: &Value) -> Result<Complex64, CliError> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .map(|x| Complex64::new(x, 0.0))
            .ok_or_else(|| invalid(key, format!("bad number {n}"))),
        Value::String(s) => {
            let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
            compact
                .parse::<Complex64>()
                .map_err(|_| invalid(key, format!("cannot parse {s:?} as a complex number")))
        }
        other => Err(invalid(key, format!("expected a number or complex string, got {other}"))),
    }
}

fn parse_matrix(key: &str, v: &Value) -> Result<CMatrix, CliError> {
    let Value::Array(items) = v else {
        return Err(invalid(key, "expected a matrix (list of rows)"));
    };
    let mut entries = Vec::new();
    for item in items {
        match item {
            Value::Array(row) => {
                if row.len() != items.len() {
                    return Err(invalid(key, "matrix is not square"));
                }
                for x in row {
                    entries.push(parse_entry(key, x)?);
                }
            }
            x => entries.push(parse_entry(key, x)?),
        }
    }
    CMatrix::from_row_major(entries).map_err(wrap(key))
}

fn parse_matrices(key: &str, v: &Value) -> Result<Vec<CMatrix>, CliError> {
    match v {
        Value::Array(ms) => ms.iter().map(|m| parse_matrix(key, m)).collect(),
        _ => Err(invalid(key, "expected a list of matrices")),
    }
}

/// Single-key object `{"name": value}`.
fn tagged<'a>(key: &str, v: &'a Value) -> Result<(&'a str, &'a Value), CliError> {
    match v {
        Value::Object(map) if map.len() == 1 => {
            let (k, val) = map.iter().next().expect("one entry");
            Ok((k.as_str(), val))
        }
        _ => Err(invalid(key, format!("expected a preset name or a single-key object, got {v}"))),
    }
}

fn as_f64(key: &str, v: &Value) -> Result<f64, CliError> {
    v.as_f64().ok_or_else(|| invalid(key, format!("expected a number, got {v}")))
}

fn as_dim(key: &str, v: &Value) -> Result<usize, CliError> {
    v.as_u64()
        .map(|d| d as usize)
        .ok_or_else(|| invalid(key, format!("expected a dimension, got {v}")))
}

pub fn parse_state(key: &str, v: &Value) -> Result<DensityMatrix, CliError> {
    if let Value::String(name) = v {
        return match name.as_str() {
            "plus" => Ok(DensityMatrix::plus()),
            "minus" => Ok(DensityMatrix::minus()),
            "zero" => Ok(DensityMatrix::zero()),
            "one" => Ok(DensityMatrix::one()),
            "mixed" | "mixed:I/2" => DensityMatrix::maximally_mixed(2).map_err(wrap(key)),
            other => Err(invalid(key, format!("unknown state preset {other:?}"))),
        };
    }
    let (tag, val) = tagged(key, v)?;
    match tag {
        "bloch" => {
            let r: Vec<f64> = serde_json::from_value(val.clone())
                .map_err(|e| invalid(key, format!("bloch: {e}")))?;
            let r: [f64; 3] = r
                .try_into()
                .map_err(|_| invalid(key, "bloch vector needs three components"))?;
            DensityMatrix::from_bloch(r).map_err(wrap(key))
        }
        "mixed" => DensityMatrix::maximally_mixed(as_dim(key, val)?).map_err(wrap(key)),
        "matrix" => DensityMatrix::new(parse_matrix(key, val)?).map_err(wrap(key)),
        other => Err(invalid(key, format!("unknown state form {other:?}"))),
    }
}

pub fn parse_measurement(key: &str, v: &Value) -> Result<Measurement, CliError> {
    if let Value::String(name) = v {
        return match name.as_str() {
            "sigmaz" => Ok(Measurement::sigma_z()),
            "sigmax" => Ok(Measurement::sigma_x()),
            "sigmay" => Ok(Measurement::sigma_y()),
            other => Err(invalid(key, format!("unknown measurement preset {other:?}"))),
        };
    }
    let (tag, val) = tagged(key, v)?;
    match tag {
        "angle" => Ok(Measurement::qubit_angle(as_f64(key, val)?)),
        "computational" => Measurement::computational(as_dim(key, val)?).map_err(wrap(key)),
        "effects" => Measurement::general(parse_matrices(key, val)?).map_err(wrap(key)),
        other => Err(invalid(key, format!("unknown measurement form {other:?}"))),
    }
}

fn parse_instrument(v: Option<&Value>, a: Measurement, eps: Option<f64>) -> Result<InstrumentSpec, CliError> {
    const KEY: &str = "realization";
    let spec = match v {
        None => InstrumentSpec::ideal(a),
        Some(Value::String(s)) if s == "lueders" => InstrumentSpec::ideal(a),
        Some(v) => {
            let (tag, val) = tagged(KEY, v)?;
            match tag {
                "unitaries" => InstrumentSpec::new(a, Realization::RealizationUnitaries(parse_matrices(KEY, val)?), 0.0),
                "kraus" => InstrumentSpec::new(a, Realization::NoisyChannel { kraus: parse_matrices(KEY, val)? }, 0.0),
                "depolarizing" => InstrumentSpec::depolarizing(a, as_f64(KEY, val)?),
                "amplitude_damping" => InstrumentSpec::amplitude_damping(a, as_f64(KEY, val)?),
                other => return Err(invalid(KEY, format!("unknown realization {other:?}"))),
            }
            .map_err(wrap(KEY))?
        }
    };
    match eps {
        Some(e) => spec.with_epsilon(e).map_err(wrap("eps_a")),
        None => Ok(spec),
    }
}

/// Parses and validates a configuration document. `seed` overrides the
/// document's seed when given.
pub fn parse_config(text: &str, seed: Option<u64>) -> Result<RunConfig, CliError> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| {
        if e.is_syntax() || e.is_eof() {
            CliError::Syntax {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            }
        } else {
            invalid("config", e.to_string())
        }
    })?;

    let rho = parse_state("state", &raw.state)?;
    let a = parse_measurement("a", &raw.a)?;
    let b = parse_measurement("b", &raw.b)?;
    let trust = match raw.trust.unwrap_or(TrustName::Untrusted) {
        TrustName::Untrusted => TrustLevel::UntrustedPovm,
        TrustName::Projective => {
            if !a.is_projective() {
                return Err(invalid("trust", "A is not projective"));
            }
            TrustLevel::ProjectiveUncharacterized
        }
        TrustName::Trusted => TrustLevel::trusted_pair(&a, &b).map_err(wrap("trust"))?,
    };
    let instrument = parse_instrument(raw.realization.as_ref(), a, raw.eps_a)?;
    let real_effects = raw
        .b_real_effects
        .as_ref()
        .map(|ms| ms.iter().map(|m| parse_matrix("b_real_effects", m)).collect::<Result<Vec<_>, _>>())
        .transpose()?;
    let test_b = TestMeasurementSpec::new(b, real_effects, raw.eps_b.unwrap_or(0.0)).map_err(wrap("b_real_effects"))?;
    let noise = NoiseParams::new(instrument.epsilon_a(), test_b.epsilon_b()).map_err(wrap("eps_a"))?;

    let n = raw.n.unwrap_or(DEFAULT_N);
    let n_u = raw.n_u.unwrap_or_else(|| default_upper_count(n));
    let scenario = Scenario::new(rho, instrument, test_b, n, n_u, seed.or(raw.seed).unwrap_or(0))
        .map_err(wrap("n_u"))?;
    let budget = raw.budget.unwrap_or(DEFAULT_BUDGET);
    if budget == 0 {
        return Err(invalid("budget", "must be at least 1"));
    }
    Ok(RunConfig {
        scenario,
        trust,
        noise,
        budget,
        source: raw.source.unwrap_or_default(),
    })
}
