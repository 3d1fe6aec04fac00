//! Command-line front end: configuration, orchestration and CSV output.
//!
//! Every run writes `config.txt` (a snapshot that re-runs to identical
//! output), `seed.txt`, `manifest.txt` and the CSVs of its subcommand into
//! the output directory.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod config;

use config::{describe, Key, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Core(#[from] haarquench::Error),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } => 1,
            CliError::Core(haarquench::Error::Capacity { .. }) => 2,
            CliError::Core(_) => 1,
            CliError::Verification(_) => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(e.into())
    }
}

#[derive(Debug, Parser)]
#[command(name = "haarquench", version, about = "Quenches under Haar-randomized Hamiltonians and their bounds")]
pub struct Cli {
    /// Master seed of all random draws (overrides `seed` in the config).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "haarquench-out")]
    pub out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Characteristic function of a spectrum on a time grid.
    Phi(Params),
    /// Closed-form bounds, time scales and constants.
    Bounds(Params),
    /// One seeded Haar draw: trace distance and purity along a trajectory.
    Quench(Params),
    /// Monte Carlo estimates with dominance flags.
    Montecarlo(Params),
    /// Inequality ledger of the block-factorization argument.
    VerifyAppendix(Params),
    /// Slab partition of a lattice and its size checks.
    Partition(Params),
}

#[derive(Debug, Args)]
pub struct Params {
    /// Configuration overrides.
    #[arg(value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Print the accepted keys and exit.
    #[arg(long)]
    pub list_keys: bool,
}

/// One output file of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct OutFile {
    pub name: &'static str,
    pub schema_version: u32,
    pub contents: String,
}

impl OutFile {
    pub fn csv(name: &'static str, contents: String) -> Self {
        Self {
            name,
            schema_version: 1,
            contents,
        }
    }
}

/// Files of a run and an optional verification failure.
#[derive(Debug, Clone, Default)]
pub struct RunProduct {
    pub files: Vec<OutFile>,
    pub failure: Option<String>,
}

impl Command {
    fn parts(&self) -> (&'static str, &Params, &'static [&'static [Key]]) {
        match self {
            Command::Phi(p) => ("phi", p, config::PHI_KEYS),
            Command::Bounds(p) => ("bounds", p, config::BOUNDS_KEYS),
            Command::Quench(p) => ("quench", p, config::QUENCH_KEYS),
            Command::Montecarlo(p) => ("montecarlo", p, config::MONTECARLO_KEYS),
            Command::VerifyAppendix(p) => ("verify-appendix", p, config::APPENDIX_KEYS),
            Command::Partition(p) => ("partition", p, config::PARTITION_KEYS),
        }
    }
}

/// Resolves the configuration of a parsed command line.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let (_, params, schema) = cli.command.parts();
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::parse(&fs::read_to_string(path)?, schema)?,
        None => RunConfig::default(),
    };
    cfg.apply_overrides(&params.set, schema)?;
    let seed = cli.seed.unwrap_or_else(|| cfg.seed());
    cfg.set("seed", &seed.to_string(), schema).map_err(CliError::Usage)?;
    Ok(cfg)
}

/// Runs a subcommand on a resolved configuration without touching the disk.
pub fn execute(name: &str, cfg: &RunConfig) -> Result<RunProduct, CliError> {
    match name {
        "phi" => commands::phi(cfg),
        "bounds" => commands::bounds(cfg),
        "quench" => commands::quench(cfg),
        "montecarlo" => commands::montecarlo(cfg),
        "verify-appendix" => commands::verify_appendix(cfg),
        "partition" => commands::partition(cfg),
        other => Err(CliError::Usage(format!("unknown subcommand {other:?}"))),
    }
}

/// Writes the snapshot, seed, manifest and CSVs of a run into `dir`.
pub fn persist(dir: &Path, cfg: &RunConfig, product: &RunProduct) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("config.txt"), cfg.snapshot())?;
    fs::write(dir.join("seed.txt"), format!("{}\n", cfg.seed()))?;
    let mut manifest = String::new();
    for f in &product.files {
        fs::write(dir.join(f.name), &f.contents)?;
        manifest.push_str(&format!("{} schema={}\n", f.name, f.schema_version));
    }
    fs::write(dir.join("manifest.txt"), manifest)?;
    Ok(())
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let (name, params, schema) = cli.command.parts();
    if params.list_keys {
        println!("keys of `{name}` (plus `seed`):\n{}", describe(schema));
        return Ok(());
    }
    let cfg = resolve_config(cli)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let product = pool.install(|| execute(name, &cfg))?;
    persist(&cli.out, &cfg, &product)?;
    match product.failure {
        Some(msg) => Err(CliError::Verification(msg)),
        None => Ok(()),
    }
}

/// Parses `args`, runs, reports errors on stderr and returns the exit code.
pub fn main_with<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("haarquench: {e}");
            e.exit_code()
        }
    }
}
