//! Command-line front end. [`run`] does all the work so it can be driven from
//! tests without spawning a process.
//!
//! Exit codes: `0` success, `1` a verification failed, `2` usage, parse or
//! input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::norm_opt::{
    explore_conclusion_questions, norm_q_to_p, stabilized_norm, NormEstimate, NormQuery, OptimizerConfig, Question,
};
use crate::schatten::{schatten_norm, SchattenExponent};
use crate::suite::{build_example, verify_with, Example, CLAIM_IDS};
use crate::superop::SuperOp;

#[derive(Debug, Parser)]
#[command(name = "superop-norms", version, about = "Schatten norms and the super-operator norms they induce")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Schatten p-norm of a matrix file.
    Schatten {
        /// Matrix JSON: {"rows", "cols", "entries": [[re, im], ...]} in row-major order.
        matrix: PathBuf,
        /// Exponent, a number >= 1 or "inf".
        #[arg(long)]
        p: SchattenExponent,
    },
    /// Induced norm ||Phi||_{q->p} of a channel file.
    Norm {
        /// Channel JSON: {"dim_in", "dim_out", "kraus_left", "kraus_right"}.
        channel: PathBuf,
        #[arg(long)]
        q: SchattenExponent,
        #[arg(long)]
        p: SchattenExponent,
        /// Restrict to Hermitian inputs.
        #[arg(long)]
        hermitian: bool,
        /// Tensor with the identity on a k-dimensional space first.
        #[arg(long, value_name = "K")]
        stabilize: Option<usize>,
        #[command(flatten)]
        opt: OptFlags,
    },
    /// ||Phi (x) I||_{1->p} with an ancilla of the input dimension
    /// (the diamond norm for p = 1).
    Stabilized {
        channel: PathBuf,
        #[arg(long)]
        p: SchattenExponent,
        #[arg(long)]
        hermitian: bool,
        #[command(flatten)]
        opt: OptFlags,
    },
    /// Run verification suites and print one JSON report per suite.
    Verify {
        /// Suite id, or "all".
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Include per-trial records in the reports.
        #[arg(long)]
        details: bool,
        #[command(flatten)]
        opt: OptFlags,
    },
    /// Sample the quantities behind an open question; prints a JSON report.
    Explore {
        channel: PathBuf,
        /// 1: representation infimum, 2: ancilla stability, 3: the same for
        /// completely positive maps.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        question: u8,
        #[arg(long, default_value = "1")]
        q: SchattenExponent,
        #[arg(long, default_value = "1")]
        p: SchattenExponent,
        #[command(flatten)]
        opt: OptFlags,
    },
    /// Print a built-in example as channel JSON.
    Example {
        /// simple_nonhermitian, qinf_nonhermitian, depolarizing_pair,
        /// dim4_pair or transpose(n).
        name: String,
        /// For pairs, print the difference Phi_0 - Phi_1 as one channel.
        #[arg(long)]
        difference: bool,
    },
}

#[derive(Debug, Args)]
pub struct OptFlags {
    /// Optimizer and instance seed.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Optimizer restarts.
    #[arg(long, default_value_t = 32)]
    restarts: usize,
}

impl OptFlags {
    fn config(&self) -> Result<OptimizerConfig> {
        let cfg = OptimizerConfig { restarts: self.restarts, ..OptimizerConfig::with_seed(self.seed) };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Serialize)]
struct NormOutput {
    value: f64,
    converged: bool,
    restarts_used: usize,
    seed: u64,
}

impl NormOutput {
    fn new(est: &NormEstimate, seed: u64) -> Self {
        Self { value: est.value, converged: est.converged, restarts_used: est.restarts_used, seed }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("cannot parse {}: {e}", path.display())))
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string(value)?)?;
    Ok(())
}

/// Returns `Ok(false)` when a verification ran but failed.
fn execute(command: Command, out: &mut dyn Write) -> Result<bool> {
    match command {
        Command::Schatten { matrix, p } => {
            let x: ComplexMatrix = read_json(&matrix)?;
            writeln!(out, "{:.12}", schatten_norm(&x, p))?;
        }
        Command::Norm { channel, q, p, hermitian, stabilize, opt } => {
            let phi: SuperOp = read_json(&channel)?;
            let cfg = opt.config()?;
            let query = NormQuery::new(q, p).hermitian(hermitian).stabilized(stabilize.unwrap_or(0));
            if stabilize == Some(0) {
                return Err(Error::InvalidInput("--stabilize must be at least 1".into()));
            }
            let est = norm_q_to_p(&phi, &query, &cfg)?;
            print_json(out, &NormOutput::new(&est, cfg.seed))?;
        }
        Command::Stabilized { channel, p, hermitian, opt } => {
            let phi: SuperOp = read_json(&channel)?;
            let cfg = opt.config()?;
            let est = stabilized_norm(&phi, p, hermitian, &cfg)?;
            print_json(out, &NormOutput::new(&est, cfg.seed))?;
        }
        Command::Verify { suite, trials, details, opt } => {
            let cfg = opt.config()?;
            let ids: Vec<&str> = if suite == "all" {
                CLAIM_IDS.to_vec()
            } else if CLAIM_IDS.contains(&suite.as_str()) {
                vec![suite.as_str()]
            } else {
                return Err(Error::InvalidInput(format!(
                    "unknown suite {suite:?}; expected \"all\" or one of {}",
                    CLAIM_IDS.join(", ")
                )));
            };
            let mut all_passed = true;
            for id in ids {
                let mut report = verify_with(id, cfg.seed, trials, &cfg)?;
                if !details {
                    report.details.clear();
                }
                all_passed &= report.passed;
                print_json(out, &report)?;
            }
            return Ok(all_passed);
        }
        Command::Explore { channel, question, q, p, opt } => {
            let phi: SuperOp = read_json(&channel)?;
            let cfg = opt.config()?;
            let report = explore_conclusion_questions(&phi, Question::from_index(question)?, &NormQuery::new(q, p), &cfg)?;
            print_json(out, &report)?;
        }
        Command::Example { name, difference } => {
            let ex = build_example(&name)?;
            match (ex, difference) {
                (Example::Single(phi), _) => print_json(out, &phi)?,
                (ex @ Example::Pair(..), true) => print_json(out, &ex.combined())?,
                (Example::Pair(a, b), false) => print_json(out, &[a, b])?,
            }
        }
    }
    Ok(true)
}
