mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "rbw", version, about = "Refined scissors congruence, X-complex audits and SL2 chain certificates over finite rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: Config,
}

#[derive(Args, Debug, Clone)]
pub struct Config {
    /// Ring spec, e.g. "gf(2,3)", "z/9", "gf(2,1)[t]/t^3".
    #[arg(long, global = true)]
    pub ring: Option<String>,
    /// Comma-separated ring specs (commas inside parentheses are kept).
    #[arg(long, global = true)]
    pub rings: Option<String>,
    /// Highest dimension for the X-complex audit.
    #[arg(long, global = true, default_value_t = 3)]
    pub dmax: usize,
    /// Tuple budget for X-complex levels.
    #[arg(long, global = true, default_value_t = rbw_core::xcomplex::DEFAULT_X_BUDGET, value_parser = positive)]
    pub budget_x: u64,
    /// Basis budget for bar / orbit complexes of the unipotent radical.
    #[arg(long, global = true, default_value_t = rbw_core::fgab::bar::DEFAULT_BAR_BUDGET, value_parser = positive)]
    pub budget_bar: u64,
    /// Basis budget for the boundary solver used by certificates.
    #[arg(long, global = true, default_value_t = rbw_core::chains::DEFAULT_BOUNDARY_BUDGET, value_parser = positive)]
    pub budget_boundary: u64,
    /// Largest X-complex level for which the condition report runs the exactness audit.
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = positive)]
    pub budget_audit: u64,
    /// Tuple budget for the bar-homology cross-check of the torus coinvariants.
    #[arg(long, global = true, default_value_t = 100_000, value_parser = positive)]
    pub budget_cross: u64,
    /// Bound on |SL2(A)| for stabilizer enumeration.
    #[arg(long, global = true, default_value_t = rbw_core::ring::DEFAULT_SL2_BOUND, value_parser = positive)]
    pub budget_sl2: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Directory for unit tables and scissors reports.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Seed for sampled parameter sets.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Keep wall-clock fields in JSON reports (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
}

fn positive(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("budget must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ring tables.
    Ring {
        #[command(subcommand)]
        command: RingCommand,
    },
    /// P(A), RP(A), the maps λ, λ1, λ2 and the Bloch groups B, RP1, RB.
    Scissors,
    /// The complex of unimodular tuples.
    Xcomplex {
        #[command(subcommand)]
        command: XcomplexCommand,
    },
    /// Chain-level certificate for one identity.
    Certify(CertifyArgs),
    /// Condition flags (1)-(3) with their evidence.
    Conditions,
    /// Tor, RB and the implied order of H3 for each ring.
    BwTable,
}

#[derive(Subcommand, Debug)]
enum RingCommand {
    /// Size, units, μ2, square classes, W_A.
    Info,
}

#[derive(Subcommand, Debug)]
enum XcomplexCommand {
    /// Exactness of X → Z, the ∂̄4 relator sign and the λ1 composite.
    Audit {
        /// Also enumerate SL2(A) and check stabilizers and orbit counts.
        #[arg(long)]
        stabilizers: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Identity {
    #[value(name = "d1_11")]
    D1_11,
    #[value(name = "d1_21")]
    D1_21,
    #[value(name = "d1_10")]
    D1_10,
    #[value(name = "d1_12")]
    D1_12,
    #[value(name = "d1_22")]
    D1_22,
    Theta,
    #[value(name = "d2_22")]
    D2_22,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[arg(value_enum)]
    pub identity: Identity,
    /// Parameters, as printed by `ring info` or as `#code`.
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub c: Option<String>,
    #[arg(long)]
    pub z: Option<String>,
    /// d1_22 over every pair of units.
    #[arg(long)]
    pub all_pairs: bool,
    /// d2_22 over every triple of units.
    #[arg(long)]
    pub all_triples: bool,
    /// d2_22 over this many distinct triples drawn with --seed.
    #[arg(long)]
    pub sample: Option<usize>,
    /// Omit the per-certificate transcripts.
    #[arg(long)]
    pub summary: bool,
}

/// Outcome of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    Budget,
}

/// Bad user input that got past clap.
#[derive(Debug)]
pub struct Invalid(pub String);

impl std::fmt::Display for Invalid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Invalid {}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    use rbw_core::Error as E;
    if err.downcast_ref::<Invalid>().is_some() {
        return 3;
    }
    match err.downcast_ref::<E>() {
        Some(E::Budget { .. }) => 2,
        Some(
            E::RingSpec(..)
            | E::ReducibleModulus(..)
            | E::SizeBound { .. }
            | E::NotLocal(_)
            | E::NotUnit(_)
            | E::Precondition(_),
        ) => 3,
        _ => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    let cfg = &cli.config;
    if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build_global()?;
    }
    let (report, status) = match &cli.command {
        Command::Ring { command: RingCommand::Info } => commands::ring_info(cfg)?,
        Command::Scissors => commands::scissors(cfg)?,
        Command::Xcomplex { command: XcomplexCommand::Audit { stabilizers } } => commands::xcomplex_audit(cfg, *stabilizers)?,
        Command::Certify(args) => commands::certify(cfg, args)?,
        Command::Conditions => commands::conditions(cfg)?,
        Command::BwTable => commands::bw_table(cfg)?,
    };
    let bytes = report.render(cfg.format, cfg.timings)?;
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, bytes)?;
            log::info!("wrote {}", path.display());
        }
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes)?;
        }
    }
    Ok(status)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(1),
        Ok(Status::Budget) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
