use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use lame_bethe::master::{DEFAULT_QUANTUM, DEFAULT_TOL};
use lame_bethe::pipeline::{self, Level, SolveArgs};
use lame_bethe::solver::SolveOptions;
use lame_bethe::{Caps, Error, WeightSystem};

const THREADS_VAR: &str = "LAME_BETHE_THREADS";

#[derive(Parser)]
#[command(name = "lame-bethe", version, about = "Bethe ansatz critical points, fundamental operators and orbit bounds")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Bound d(n-1, l), separating test, and the sl2 multiplicity when defined.
    Count(Common),
    /// Find critical-point orbits.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Number of random starts (default 50 per expected orbit).
        #[arg(long)]
        starts: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Exhaustive real solve over interlacing cells (r = 1, real data).
        #[arg(long)]
        real_classical: bool,
        /// Skip the per-orbit operator checks.
        #[arg(long)]
        no_verify: bool,
    },
    /// Check a single orbit: criticality, exponents, flag and Wronskian identities.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        orbit: PathBuf,
        #[arg(long, default_value = "all")]
        level: Level,
    },
    /// Real second-order case: all Heine-Stieltjes polynomials with their Van Vleck partners.
    Classical(Common),
}

#[derive(Args)]
struct Common {
    /// Weight-system JSON file ("-" for stdin).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_QUANTUM)]
    quantum: f64,
    /// Resource caps, e.g. `separating=1e7,compositions=1e8`.
    #[arg(long)]
    caps: Option<String>,
    /// Emit a CSV table instead of JSON.
    #[arg(long)]
    csv: bool,
}

impl Common {
    fn load(&self) -> Result<(WeightSystem, SolveOptions), Failure> {
        if !(self.tol > 0.0) || !(self.quantum > 0.0) {
            return Err(Error::InvalidInput("tol and quantum must be positive".into()).into());
        }
        let caps = match &self.caps {
            Some(s) => pipeline::parse_caps(s)?,
            None => Caps::default(),
        };
        let ws = pipeline::parse_ws(&read(&self.input)?)?;
        Ok((ws, SolveOptions { tol: self.tol, quantum: self.quantum, caps }))
    }
}

/// Either a domain error (mapped to its exit code) or an I/O problem (exit 2).
enum Failure {
    Domain(Error),
    Io(anyhow::Error),
    /// A report was produced but some check failed.
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Io(e)
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).context("reading stdin")?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

/// Writes to stdout; a closed pipe downstream is not an error.
fn out(text: &str) -> Result<(), Failure> {
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(anyhow::Error::from(e).into()),
        _ => Ok(()),
    }
}

fn emit<T: serde::Serialize>(value: &T) -> Result<(), Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(anyhow::Error::from)?;
    s.push('\n');
    out(&s)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Count(common) => {
            let (ws, opts) = common.load()?;
            let rep = pipeline::cmd_count(&ws, &opts.caps)?;
            if common.csv {
                out(&pipeline::count_csv(&rep))
            } else {
                emit(&rep)
            }
        }
        Cmd::Solve { common, starts, seed, real_classical, no_verify } => {
            let (ws, opts) = common.load()?;
            let args = SolveArgs { starts, seed, opts, real_classical, verify: !no_verify };
            let rep = pipeline::cmd_solve(&ws, &args)?;
            if common.csv {
                out(&pipeline::solve_csv(&rep))
            } else {
                emit(&rep)
            }
        }
        Cmd::Verify { common, orbit, level } => {
            let (ws, opts) = common.load()?;
            let coords = pipeline::parse_orbit(&read(&orbit)?)?;
            let rep = pipeline::verify_point(&ws, &coords, level, opts.tol, 0)?;
            emit(&rep)?;
            if rep.passed {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
        Cmd::Classical(common) => {
            let (ws, opts) = common.load()?;
            let rep = pipeline::cmd_classical(&ws, &opts)?;
            if common.csv {
                out(&pipeline::classical_csv(&rep))?;
            } else {
                emit(&rep)?;
            }
            if rep.passed() {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v.trim().parse().with_context(|| format!("{THREADS_VAR}={v:?} is not a thread count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Checks) => ExitCode::from(3),
    }
}
