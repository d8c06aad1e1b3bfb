//! `strata-cones`: command-line front end.

mod commands;
mod input;
mod report;
mod selfcheck;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::{Kind, Outcome};
use report::RunReport;

#[derive(Parser)]
#[command(name = "strata-cones", version, about = "Intersection numbers and cone certificates for 2-cycles on M̄₀,₇")]
struct Cli {
    /// Write the run report as JSON (`-` for stdout).
    #[arg(long, global = true, value_name = "PATH")]
    json_out: Option<PathBuf>,
    /// Size of the worker pool.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List boundary divisors, 2-strata or numerical classes.
    Enumerate {
        #[arg(value_enum)]
        kind: Kind,
    },
    /// The Gram matrix of the class representatives.
    Gram {
        #[arg(long)]
        rank: bool,
        #[arg(long)]
        signature: bool,
    },
    /// Lines, special labels and class of a point configuration.
    Surface {
        /// A points file or fixture name.
        points: String,
    },
    /// Decide membership of a class in a cone, with a certificate.
    Cone {
        /// `stratum:I,J,K`, `kv:ab,m,ij`, or a class or points file.
        target: String,
        #[arg(long, default_value = "V2")]
        cone: String,
        /// Surfaces added for V2KVCT (default: h1, h2, h3).
        #[arg(long = "surface", value_name = "POINTS")]
        surfaces: Vec<String>,
        /// Check this certificate instead of solving.
        #[arg(long, value_name = "CERT")]
        verify: Option<String>,
    },
    /// Orbit and stabilizer of the special surface class.
    Classify {
        #[arg(long, default_value_t = 0)]
        characteristic: u32,
    },
    /// The 315 Keel–Vermeire lifts and their pushforwards.
    KvLifts {
        /// Also certify every lift outside V2.
        #[arg(long)]
        certify: bool,
    },
    /// Run the invariant suite.
    Selfcheck {
        /// Skip the linear programs.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Internal(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Internal(m) => write!(f, "internal inconsistency: {m}"),
        }
    }
}

impl From<strata_cones::Error> for CliError {
    fn from(e: strata_cones::Error) -> Self {
        match e {
            strata_cones::Error::Internal(m) => CliError::Internal(m),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Invalid(_) => ExitCode::from(2),
            CliError::Internal(_) => ExitCode::from(3),
        }
    }
}

fn selfcheck(quick: bool) -> Result<Outcome, CliError> {
    let mut inputs = Vec::new();
    for name in ["gamma0", "h1", "h2", "h3", "fano"] {
        inputs.push(input::Input::read(&input::resolve(name)?)?);
    }
    let results = selfcheck::run(quick);
    let summary = results
        .iter()
        .map(|r| match &r.outcome {
            Ok(d) => format!("PASS {}: {d}", r.name),
            Err(d) => format!("FAIL {}: {d}", r.name),
        })
        .collect();
    let failed: Vec<_> = results.iter().filter(|r| r.outcome.is_err()).map(|r| r.name).collect();
    let args = if quick { vec!["--quick".into()] } else { vec![] };
    Ok(Outcome {
        args,
        inputs,
        outputs: selfcheck::to_json(&results),
        summary,
        failure: (!failed.is_empty()).then(|| CliError::Internal(format!("failed checks: {}", failed.join(", ")))),
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Invalid("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    let start = Instant::now();
    let (name, outcome) = match &cli.command {
        Command::Enumerate { kind } => ("enumerate", Ok(commands::enumerate(*kind))),
        Command::Gram { rank, signature } => ("gram", commands::gram(*rank, *signature)),
        Command::Surface { points } => ("surface", commands::surface(points)),
        Command::Cone {
            target,
            cone,
            surfaces,
            verify,
        } => ("cone", commands::cone(target, cone, surfaces, verify.as_deref())),
        Command::Classify { characteristic } => ("classify", commands::classify(*characteristic)),
        Command::KvLifts { certify } => ("kv-lifts", commands::kv_lifts(*certify)),
        Command::Selfcheck { quick } => ("selfcheck", selfcheck(*quick)),
    };
    let outcome = outcome?;
    let files: Vec<&[u8]> = outcome.inputs.iter().map(|i| i.bytes.as_slice()).collect();
    let digest = report::digest(name, &outcome.args, &files);
    let report = RunReport::new(name, digest, outcome.outputs, start.elapsed());
    match cli.json_out.as_deref() {
        Some(p) if p.as_os_str() == "-" => {
            println!("{}", serde_json::to_string_pretty(&report).map_err(|e| CliError::Internal(e.to_string()))?);
        }
        Some(p) => {
            report.write(p)?;
            outcome.summary.iter().for_each(|l| println!("{l}"));
        }
        None => outcome.summary.iter().for_each(|l| println!("{l}")),
    }
    outcome.failure.map_or(Ok(()), Err)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
