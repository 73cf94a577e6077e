//! Configuration loading, subcommands and CSV output.
//!
//! Every command writes its files into an output directory and returns a
//! human-readable summary together with the process exit code.

mod config;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use config::{parse_config, parse_measurement, parse_state, RunConfig, Source, DEFAULT_BUDGET, DEFAULT_N};

use crate::certifier::{
    certify, figure2_grid, figure3_grid, sweep_figure2, sweep_figure3, CertInput, CertReport,
};
use crate::error::Error;
use crate::oracle::{chain_values, check_bound_orderings, check_soundness, verify_lemma_chains, LinkStats};
use crate::protocol::{analytic_statistics, run_protocol, EmpiricalStats};
use crate::quantum::{outcome_distribution, Measurement, DensityMatrix};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("config key `{key}`: {message}")]
    Config { key: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::InconsistentData(_)) => EXIT_INCONSISTENT,
            _ => EXIT_USAGE,
        }
    }
}

/// Summary text and exit code of a finished command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub report: String,
    pub exit_code: i32,
}

/// Six significant digits, shortest round-trip rendering.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{x:.5e}").parse().expect("formatted float parses");
    // avoid "-0.0"
    format!("{:?}", rounded + 0.0)
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

pub fn load_config(path: &Path, seed: Option<u64>) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text, seed)
}

/// `stats.csv` contents.
pub fn stats_csv(stats: &EmpiricalStats) -> String {
    let mut out = String::from("path,outcome,count,freq\n");
    for (path, counts, dist) in [
        ("upper", &stats.counts_q, &stats.q_hat),
        ("lower", &stats.counts_q_prime, &stats.q_prime_hat),
    ] {
        for (j, (c, f)) in counts.iter().zip(dist.probs()).enumerate() {
            writeln!(out, "{path},{j},{c},{}", fmt_num(*f)).expect("string write");
        }
    }
    writeln!(out, "d_hat,{}", fmt_num(stats.d_hat)).expect("string write");
    out
}

pub fn cmd_simulate(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let stats = run_protocol(&cfg.scenario)?;
    let path = write_file(out, "stats.csv", &stats_csv(&stats))?;
    let (_, _, d) = analytic_statistics(&cfg.scenario)?;
    let s = &cfg.scenario;
    let report = format!(
        "n = {}, n_u = {}, seed = {}\nd_hat = {} (analytic {})\nwrote {}\n",
        s.n,
        s.n_u,
        s.seed,
        fmt_num(stats.d_hat),
        fmt_num(d),
        path.display()
    );
    Ok(Outcome { report, exit_code: EXIT_OK })
}

/// `cert.csv` contents.
pub fn cert_csv(report: &CertReport) -> String {
    let mut out = String::from("theorem,disturbance,tau,adjusted,bits\n");
    let rows = report.bounds.iter().map(|b| (b.theorem.label(), b)).chain([("best", &report.best)]);
    for (name, b) in rows {
        writeln!(
            out,
            "{name},{},{},{},{}",
            fmt_num(b.disturbance_used),
            fmt_opt(b.tau),
            b.adjusted,
            fmt_num(b.bits)
        )
        .expect("string write");
    }
    out
}

/// Certification input for a configuration: exact statistics, or a Monte
/// Carlo run when the config asks for empirical ones.
pub fn certification_input(cfg: &RunConfig) -> Result<CertInput, CliError> {
    Ok(match cfg.source {
        Source::Analytic => CertInput::from(analytic_statistics(&cfg.scenario)?),
        Source::Empirical => CertInput::from(&run_protocol(&cfg.scenario)?),
    })
}

pub fn cmd_certify(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let input = certification_input(cfg)?;
    let p = outcome_distribution(cfg.scenario.instrument_a.measurement(), &cfg.scenario.rho)?;
    let report = certify(&input, &cfg.trust, cfg.noise, Some(&p))?;
    let path = write_file(out, "cert.csv", &cert_csv(&report))?;
    let mut text = String::new();
    for b in &report.bounds {
        writeln!(text, "{:<9} {} bits", b.theorem.label(), fmt_num(b.bits)).expect("string write");
    }
    writeln!(text, "best: {} bits ({})", fmt_num(report.best.bits), report.best.theorem).expect("string write");
    writeln!(text, "wrote {}", path.display()).expect("string write");
    Ok(Outcome { report: text, exit_code: EXIT_OK })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn link_row(out: &mut String, check: &str, l: &LinkStats) {
    writeln!(
        out,
        "{check},{},{},{},{},{}",
        csv_field(&l.name),
        l.checked,
        l.violations,
        fmt_num(l.min_slack),
        fmt_num(l.tightest_ratio)
    )
    .expect("string write");
}

pub fn cmd_verify(instances: usize, dims: &[usize], seed: u64, out: &Path) -> Result<Outcome, CliError> {
    if instances == 0 {
        return Err(CliError::Usage("--instances must be at least 1".into()));
    }
    let lemmas = verify_lemma_chains(instances, dims, seed)?;
    let orderings = check_bound_orderings(instances, seed)?;
    let soundness = check_soundness(instances, seed)?;

    let mut csv = String::from("check,link,checked,violations,min_slack,tightest_ratio\n");
    let mut text = String::new();
    let mut violations = 0;
    for c in &lemmas.chains {
        writeln!(text, "chain ({}): {} violations, max violation {:.3e}", c.chain.label(), c.violations(), c.max_violation())
            .expect("string write");
        for l in &c.links {
            writeln!(text, "  {l}").expect("string write");
            link_row(&mut csv, &format!("chain_{}", c.chain.label()), l);
        }
        violations += c.violations();
    }
    writeln!(text, "bound orderings:").expect("string write");
    for l in &orderings {
        writeln!(text, "  {l}").expect("string write");
        link_row(&mut csv, "ordering", l);
        violations += l.violations;
    }
    writeln!(text, "soundness on pure qubit states:").expect("string write");
    for (_, l) in &soundness {
        writeln!(text, "  {l}").expect("string write");
        link_row(&mut csv, "soundness", l);
        violations += l.violations;
    }

    // (|+⟩, σz, σx): both sides of the von Neumann chain equal 1/2
    let v = chain_values(&DensityMatrix::plus(), &Measurement::sigma_z(), &Measurement::sigma_x())?;
    let lhs = 0.5 * std::f64::consts::SQRT_2 * v.delta_a;
    writeln!(
        text,
        "worked example, chain (iii): (1/2) delta_AB delta_A = {} >= D = {}{}",
        fmt_num(lhs),
        fmt_num(v.d_ab),
        if (lhs - v.d_ab).abs() <= 1e-9 { " (equality)" } else { "" }
    )
    .expect("string write");

    let path = write_file(out, "verify.csv", &csv)?;
    writeln!(text, "total violations: {violations}\nwrote {}", path.display()).expect("string write");
    Ok(Outcome {
        report: text,
        exit_code: if violations == 0 { EXIT_OK } else { EXIT_VERIFICATION },
    })
}

pub fn cmd_figure2(c00: f64, steps: usize, out: &Path) -> Result<Outcome, CliError> {
    let rows = sweep_figure2(c00, &figure2_grid(c00, steps)?)?;
    let mut csv = String::from("d,thm1_bits,thm2_bits,thm3_bits\n");
    for r in &rows {
        writeln!(csv, "{},{},{},{}", fmt_num(r.d), fmt_opt(r.thm1), fmt_opt(r.thm2), fmt_opt(r.thm3))
            .expect("string write");
    }
    let path = write_file(out, "fig2.csv", &csv)?;
    Ok(Outcome {
        report: format!("{} rows\nwrote {}\n", rows.len(), path.display()),
        exit_code: EXIT_OK,
    })
}

pub fn cmd_figure3(c: f64, steps: usize, budget: usize, out: &Path) -> Result<Outcome, CliError> {
    let rows = sweep_figure3(c, &figure3_grid(steps)?, budget)?;
    let mut csv = String::from("q0,baseline_bits,kl_min_bits,kl_max_bits\n");
    for r in &rows {
        writeln!(csv, "{},{},{},{}", fmt_num(r.q0), fmt_num(r.baseline), fmt_num(r.kl_min), fmt_num(r.kl_max))
            .expect("string write");
    }
    let path = write_file(out, "fig3.csv", &csv)?;
    let below = rows.iter().filter(|r| r.kl_min < r.baseline).count();
    Ok(Outcome {
        report: format!(
            "{} rows, {} with min KL below the baseline\nwrote {}\n",
            rows.len(),
            below,
            path.display()
        ),
        exit_code: EXIT_OK,
    })
}

/// Parses a comma-separated dimension list such as `2,3,4`.
pub fn parse_dims(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad dimension {t:?} in --dims")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(1.0), "1.0");
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(0.0), "0.0");
        assert_eq!(fmt_num(-0.0), "0.0");
        assert_eq!(fmt_num(0.22844718), "0.228447");
        assert_eq!(fmt_num(1234567.0), "1234570.0");
        assert_eq!(fmt_num(1.23456789e-7), "1.23457e-7");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("a >= b"), "a >= b");
        assert_eq!(csv_field("D(rho,rho')"), "\"D(rho,rho')\"");
    }

    #[test]
    fn dims_parse() {
        assert_eq!(parse_dims("2,3, 4").unwrap(), vec![2, 3, 4]);
        assert!(parse_dims("2,x").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Core(Error::InconsistentData("x".into())).exit_code(), 3);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(CliError::Core(Error::InvalidArgument("x".into())).exit_code(), 2);
    }
}
