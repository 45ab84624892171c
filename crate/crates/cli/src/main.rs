//! `zcone`: command-line access to the Z-transformation oracles.

mod commands;
mod error;
mod matrix_file;
mod report;

use clap::{Parser, Subcommand, ValueEnum};
use error::CliError;
use matrix_file::MatrixFile;
use report::{render_flat, render_tree, MapBuilder, Node};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use zcone::audit::AuditSuite;
use zcone::copositivity::CopositiveCone;

#[derive(Debug, Parser)]
#[command(name = "zcone", version, about = "Z-transformations on the Lorentz cone")]
struct Cli {
    /// Relative tolerance.
    #[arg(long, global = true, default_value_t = zcone::DEFAULT_TOL)]
    tol: f64,
    /// Seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print one `key = value` line per leaf instead of JSON.
    #[arg(long, global = true)]
    flat: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// γ(A), the PSD interval and the interior/boundary/outside verdict.
    Classify { file: PathBuf },
    /// Certificate A = γI − J(P + Q).
    Decompose { file: PathBuf },
    /// Membership in the dual cone, with a pairing audit.
    Dual {
        file: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Copositivity on L or on its boundary.
    Copositive {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ConeArg::L)]
        cone: ConeArg,
    },
    /// Boundary rank-one decomposition of a PSD matrix with ⟨J, X⟩ = 0.
    Rank1 { file: PathBuf },
    /// Slice SDP with trace normalization and its boundary-atom certificate.
    SliceSdp { file: PathBuf },
    /// Seeded property suite.
    Audit {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConeArg {
    #[value(name = "L")]
    L,
    #[value(name = "boundary")]
    Boundary,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Agreement,
    Generators,
    Duality,
    ExpInvariance,
}

impl From<SuiteArg> for AuditSuite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Agreement => AuditSuite::Agreement,
            SuiteArg::Generators => AuditSuite::Generators,
            SuiteArg::Duality => AuditSuite::Duality,
            SuiteArg::ExpInvariance => AuditSuite::ExpInvariance,
        }
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Decompose { .. } => "decompose",
            Command::Dual { .. } => "dual",
            Command::Copositive { .. } => "copositive",
            Command::Rank1 { .. } => "rank1",
            Command::SliceSdp { .. } => "slice-sdp",
            Command::Audit { .. } => "audit",
        }
    }

    fn input(&self) -> Option<&PathBuf> {
        match self {
            Command::Classify { file }
            | Command::Decompose { file }
            | Command::Dual { file, .. }
            | Command::Copositive { file, .. }
            | Command::Rank1 { file }
            | Command::SliceSdp { file } => Some(file),
            Command::Audit { .. } => None,
        }
    }
}

/// The report and whether every audited check passed.
fn run(cli: &Cli) -> Result<(Node, bool), CliError> {
    if !(cli.tol >= 0.0 && cli.tol.is_finite()) {
        let msg = format!("--tol must be a nonnegative number, got {}", cli.tol);
        return Err(zcone::Error::InvalidArgument(msg).into());
    }
    let mut header = MapBuilder::new()
        .field("command", cli.command.name())
        .field("tol", cli.tol)
        .field("seed", cli.seed);
    let file = cli.command.input().map(|p| MatrixFile::read(p)).transpose()?;
    if let Some(f) = &file {
        header = header.field(
            "input",
            MapBuilder::new()
                .field("n", f.n())
                .field("kind", f.kind.as_str())
                .field("sha256", f.digest.clone())
                .build(),
        );
    }
    let tol = cli.tol;
    let (result, passed) = match (&cli.command, &file) {
        (Command::Audit { suite, n, samples }, _) => {
            commands::audit((*suite).into(), *n, *samples, cli.seed, tol)?
        }
        (cmd, Some(f)) => {
            let node = match cmd {
                Command::Classify { .. } => commands::classify(f, tol)?,
                Command::Decompose { .. } => commands::decompose(f, tol)?,
                Command::Dual { samples, .. } => commands::dual(f, tol, *samples, cli.seed)?,
                Command::Copositive { cone, .. } => {
                    let cone = match cone {
                        ConeArg::L => CopositiveCone::Lorentz,
                        ConeArg::Boundary => CopositiveCone::Boundary,
                    };
                    commands::copositive(f, cone, tol)?
                }
                Command::Rank1 { .. } => commands::rank1(f, tol)?,
                Command::SliceSdp { .. } => commands::slice_sdp(f, tol)?,
                Command::Audit { .. } => unreachable!(),
            };
            (node, true)
        }
        (_, None) => unreachable!("every non-audit command reads a matrix file"),
    };
    Ok((header.field("result", result).build(), passed))
}

fn main() -> ExitCode {
    env_logger::Builder::new()
        .filter_level(log::LevelFilter::Warn)
        .init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok((node, passed)) => {
            let text = if cli.flat { render_flat(&node) } else { render_tree(&node) };
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(4);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                let e = CliError::AuditFailed("one or more checks failed".into());
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
