// Copyright 2026 The acmag Authors
// SPDX-License-Identifier: Apache-2.0

//! `acmag` command-line front end.
//!
//! Exit codes: 0 success, 1 configuration error, 2 verification failure,
//! 3 I/O error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use acmag::sensitivity::NoiseKind;
use acmag::sweep::presets::preset;
use acmag::sweep::{
    parse_config, render, run_probability, run_sweep, verify, Fault, Format, Mode, SweepConfig,
};
use acmag::{Error, Scheme};
use clap::{Args, Parser, Subcommand};

const EXIT_CONFIG: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "acmag",
    version,
    about = "GHZ versus individual qubit probes for AC magnetometry under Markovian noise"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Projection probability p(t) on [0, t_final].
    Probability(PointArgs),
    /// Optimal interrogation time and amplitude uncertainty at one point.
    Sensitivity(PointArgs),
    /// Evaluate a parameter grid and write the result table.
    Sweep(CommonArgs),
    /// Run the oracle suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Configuration file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in configuration (fig1, fig2, fig3, fig4).
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// analytic | numeric | compare
    #[arg(long)]
    mode: Option<Mode>,
    /// Output file; standard output if absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// csv | json
    #[arg(long)]
    format: Option<Format>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Seed for randomized verification states.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct PointArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Qubit count.
    #[arg(short = 'L', long = "qubits")]
    qubits: Option<usize>,
    /// Signal frequency m.
    #[arg(long)]
    m: Option<f64>,
    /// Decoherence rate Γ.
    #[arg(long)]
    gamma: Option<f64>,
    /// parallel | depolarizing
    #[arg(long)]
    noise: Option<NoiseKind>,
    /// individual | ghz
    #[arg(long)]
    scheme: Option<Scheme>,
    /// Signal amplitude ε.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Total measurement time T.
    #[arg(long = "total-time")]
    total_time: Option<f64>,
    /// End of the probability trace.
    #[arg(long = "t-final")]
    t_final: Option<f64>,
    /// Samples in the probability trace.
    #[arg(long = "points")]
    points: Option<usize>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long = "inject-fault", hide = true)]
    inject_fault: Option<Fault>,
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Verify,
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Verify => EXIT_VERIFY,
            Failure::Io(_) => EXIT_IO,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(io) => Failure::Io(io.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

fn load(common: &CommonArgs, fallback: &str) -> Result<SweepConfig, Failure> {
    let mut cfg = match (&common.config, &common.preset) {
        (Some(path), _) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            parse_config(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
        }
        (None, Some(name)) => preset(name)?,
        (None, None) => parse_config(fallback)?,
    };
    if let Some(mode) = common.mode {
        cfg.mode = mode;
    }
    if let Some(output) = &common.output {
        cfg.output = Some(output.clone());
    }
    if let Some(format) = common.format {
        cfg.format = format;
    }
    if let Some(jobs) = common.jobs {
        cfg.jobs = Some(jobs);
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn load_point(args: &PointArgs) -> Result<SweepConfig, Failure> {
    let mut cfg = load(&args.common, "L = 1")?;
    if let Some(l) = args.qubits {
        cfg.nqubits = vec![l];
    }
    if let Some(m) = args.m {
        cfg.m = vec![m];
    }
    if let Some(g) = args.gamma {
        cfg.gamma = vec![g];
    }
    if let Some(noise) = args.noise {
        cfg.noise = noise;
    }
    if let Some(scheme) = args.scheme {
        cfg.schemes = vec![scheme];
    }
    if let Some(eps) = args.epsilon {
        cfg.epsilon = eps;
    }
    if let Some(t) = args.total_time {
        cfg.total_time = t;
    }
    if let Some(t) = args.t_final {
        cfg.t_final = t;
    }
    if let Some(n) = args.points {
        cfg.t_points = n;
    }
    Ok(cfg)
}

fn write_out(text: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Probability(args) => {
            let cfg = load_point(&args)?;
            cfg.validate()?;
            let rows = run_probability(&cfg)?;
            write_out(&render(&rows, cfg.format)?, cfg.output.as_deref())
        }
        Command::Sensitivity(args) => {
            let cfg = load_point(&args)?;
            cfg.validate()?;
            let rows = run_sweep(&cfg)?;
            write_out(&render(&rows, cfg.format)?, cfg.output.as_deref())
        }
        Command::Sweep(common) => {
            if common.config.is_none() && common.preset.is_none() {
                return Err(Failure::Config(
                    "sweep needs --config <path> or --preset <name>".into(),
                ));
            }
            let cfg = load(&common, "")?;
            cfg.validate()?;
            let rows = run_sweep(&cfg)?;
            write_out(&render(&rows, cfg.format)?, cfg.output.as_deref())
        }
        Command::Verify(args) => {
            let cfg = load(&args.common, "L = 1")?;
            cfg.validate()?;
            let report = verify(&cfg, args.inject_fault)?;
            let text = match cfg.format {
                Format::Csv => format!("{report}\n"),
                Format::Json => {
                    serde_json::to_string_pretty(&report).map_err(|e| Failure::Io(e.to_string()))?
                        + "\n"
                }
            };
            write_out(&text, cfg.output.as_deref())?;
            if report.passed() {
                Ok(())
            } else {
                for c in report.failures() {
                    eprintln!("verification failed: {}", c.name);
                }
                Err(Failure::Verify)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Config(msg) => eprintln!("configuration error: {msg}"),
                Failure::Io(msg) => eprintln!("i/o error: {msg}"),
                Failure::Verify => {}
            }
            ExitCode::from(f.code())
        }
    }
}
