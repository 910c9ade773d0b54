//! The `ftrl` experiment runner: `run`, `compare`, `repro-l1` and `verify`
//! over a flat `key = value` config, writing CSV.

mod catalog;
mod commands;
mod config;
mod format;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use catalog::{build_learner, build_stream, LearnerKind, Params, StreamKind};
pub use commands::{
    check_repro_l1, compare_learners, parse_suites, repro_l1, run_compare, run_experiment, verify,
    write_compare_csv, write_repro_csv, write_run_csv, CompareTrace, ReproL1, RunOutput, REPRO_G,
    REPRO_LAMBDA, REPRO_ROUNDS,
};
pub use config::{Config, KNOWN_KEYS};
pub use format::format_g;

use crate::error::Error;

/// Seed used by `verify` when none is given.
pub const DEFAULT_VERIFY_SEED: u64 = 7;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("violation: {0}")]
    Violation(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// 1 for property or bound violations, 2 for usage errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Violation(_) => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                Error::InvariantViolation(_)
                | Error::InternalConsistency(_)
                | Error::Domain(_)
                | Error::Unbounded(_) => 1,
                _ => 2,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ftrl", version, about = "Run and verify FTRL-family online learners")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Play one learner on one stream and check regret against a bound.
    Run(ExperimentArgs),
    /// Play two or more learners on the same stream side by side.
    Compare(ExperimentArgs),
    /// Mirror descent vs composite FTRL on the one-dimensional L1 adversary.
    ReproL1 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named property suite, or `all`.
    Verify {
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl ExperimentArgs {
    fn load(&self) -> Result<Config, CliError> {
        let mut cfg = match &self.config {
            Some(path) => Config::parse(&std::fs::read_to_string(path)?)?,
            None => Config::default(),
        };
        if let Some(seed) = self.seed {
            cfg.set("seed", seed.to_string());
        }
        Ok(cfg)
    }

    fn out_path(&self, cfg: &Config) -> Option<PathBuf> {
        self.out.clone().or_else(|| cfg.get("output").map(PathBuf::from))
    }
}

fn with_output(
    path: Option<&Path>,
    stdout: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => f(stdout)?,
    }
    Ok(())
}

/// Executes a parsed command.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Run(args) => {
            let cfg = args.load()?;
            let run = run_experiment(&cfg)?;
            with_output(args.out_path(&cfg).as_deref(), stdout, |w| write_run_csv(w, &run))?;
            match run.record.first_bound_violation() {
                Some(t) => Err(CliError::Violation(format!(
                    "regret {} exceeds {} bound {} at round {t}",
                    run.record.cum_regret[t - 1],
                    run.bound,
                    run.record.bound.as_ref().map_or(f64::NAN, |b| b[t - 1]),
                ))),
                None => Ok(()),
            }
        }
        Command::Compare(args) => {
            let cfg = args.load()?;
            let traces = run_compare(&cfg)?;
            with_output(args.out_path(&cfg).as_deref(), stdout, |w| write_compare_csv(w, &traces))
        }
        Command::ReproL1 { out } => {
            let r = repro_l1()?;
            with_output(out.as_deref(), stdout, |w| write_repro_csv(w, &r))?;
            check_repro_l1(&r).map_err(CliError::Violation)
        }
        Command::Verify { suite, seed } => {
            let suites = parse_suites(suite)?;
            verify(stdout, &suites, seed.unwrap_or(DEFAULT_VERIFY_SEED))
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "ftrl: {e}");
            e.exit_code()
        }
    }
}
