//! Drives the command layer from a JSON document, as the binary does.

use collapse_rng::cli::{cmd_certify, cmd_simulate, parse_config};

const CONFIG: &str = r#"{
  "state": {"bloch": [0.9, 0.0, 0.1]},
  "a": "sigmaz",
  "b": {"angle": 1.5},
  "realization": {"amplitude_damping": 0.01},
  "trust": "trusted",
  "eps_b": 0.0,
  "n": 200000,
  "seed": 3,
  "source": "empirical"
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = parse_config(CONFIG, None)?;
    let dir = std::env::temp_dir().join("collapse-rng-example");
    print!("{}", cmd_simulate(&cfg, &dir)?.report);
    print!("{}", std::fs::read_to_string(dir.join("stats.csv"))?);
    print!("{}", cmd_certify(&cfg, &dir)?.report);
    print!("{}", std::fs::read_to_string(dir.join("cert.csv"))?);
    Ok(())
}
