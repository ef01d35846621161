//! `jointspec`: joint spectra of solvable matrix Lie algebras from JSON
//! problem files.
//!
//! Exit codes: 0 success, 1 input error, 2 mathematical contract failure,
//! 3 a requested check failed. Reports go to stdout as JSON, diagnostics to
//! stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use jointspec::corpus::{write_corpus, CorpusSpec, Profile};
use jointspec::io::{limit_report_json, spectrum_json, to_pretty, Problem};
use jointspec::{Error, SpectrumKind, ToleranceConfig};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "jointspec", version, about = "Joint spectra of solvable matrix Lie algebras")]
struct Cli {
    #[command(flatten)]
    tol: TolArgs,
    /// Human-readable summary on stderr.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct TolArgs {
    #[arg(long, global = true, env = "JOINTSPEC_RANK_TOL", default_value_t = 1e-9)]
    rank_tol: f64,
    #[arg(long, global = true, env = "JOINTSPEC_VALUE_TOL", default_value_t = 1e-6)]
    value_tol: f64,
}

#[derive(Args, Debug)]
struct KindArgs {
    /// taylor, delta or pi; `verify` also accepts `all`.
    #[arg(long)]
    kind: Option<String>,
    /// Level of a Słodkowski kind.
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Joint spectrum of the algebra or of one of its subalgebras.
    Spectrum {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        kind: KindArgs,
        /// Subalgebra label; `L` is the whole algebra.
        #[arg(long, default_value = "L")]
        subalgebra: String,
    },
    /// Limit spectrum of a presentation by a directed family of ideals.
    Limit {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long)]
        family: Option<String>,
    },
    /// Runs one of the structural checks.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        check: Check,
        #[command(flatten)]
        kind: KindArgs,
        /// Family label; `presentation` takes two.
        #[arg(long)]
        family: Vec<String>,
        /// Ambient subalgebra for `contract`.
        #[arg(long, default_value = "L")]
        subalgebra: String,
        /// Ideal label for `projection` and `contract`.
        #[arg(long)]
        ideal: Option<String>,
        /// Claimed spectrum of the ambient algebra for `contract` (`-` for
        /// stdin).
        #[arg(long)]
        spectrum: Option<String>,
    },
    /// Writes a seeded random corpus of problem files and a manifest.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value = "upper_triangular")]
        profile: String,
        #[arg(long, default_value_t = 4)]
        max_space_dim: usize,
        #[arg(long, default_value_t = 4)]
        max_algebra_dim: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Check {
    Projection,
    Presentation,
    Uniqueness,
    Contract,
}

/// Outcome of a command that ran to completion.
struct Report {
    value: Value,
    code: u8,
    summary: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            print!("{}", to_pretty(&r.value));
            if cli.verbose {
                eprintln!("{}", r.summary);
            }
            ExitCode::from(r.code)
        }
        Err(e) => {
            let code = exit_code(&e);
            let diag = json!({ "error": error_name(&e), "message": e.to_string(), "exit_code": code });
            eprint!("{}", to_pretty(&diag));
            ExitCode::from(code)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_contract_failure() {
        2
    } else {
        1
    }
}

fn error_name(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

fn load(path: &PathBuf, cfg: &ToleranceConfig) -> jointspec::Result<Problem> {
    Problem::parse(&std::fs::read_to_string(path)?, cfg)
}

fn parse_kind(args: &KindArgs) -> jointspec::Result<SpectrumKind> {
    SpectrumKind::from_parts(args.kind.as_deref().unwrap_or("taylor"), args.k)
}

fn run(cli: &Cli) -> jointspec::Result<Report> {
    let cfg = ToleranceConfig::new(cli.tol.rank_tol, cli.tol.value_tol)?;
    match &cli.command {
        Command::Spectrum {
            input,
            kind,
            subalgebra,
        } => {
            let p = load(input, &cfg)?;
            let kind = parse_kind(kind)?;
            let alg = p.subalgebra(subalgebra)?.to_algebra()?;
            let result = jointspec::spectrum(&alg, kind, &cfg)?;
            Ok(Report {
                summary: format!(
                    "{kind} spectrum of `{subalgebra}`: {} point(s), {} complexes, max d∘d residual {:.2e}",
                    result.points.len(),
                    result.complexes_built,
                    result.max_complex_residual
                ),
                value: spectrum_json(subalgebra, &result),
                code: 0,
            })
        }
        Command::Limit {
            input,
            kind,
            family,
        } => {
            let p = load(input, &cfg)?;
            let kind = parse_kind(kind)?;
            let label = commands::pick_family(&p, family.as_deref())?;
            let report = jointspec::limit::limit_report(p.family(&label)?, kind, &cfg)?;
            let ok = report.checks.all();
            Ok(Report {
                summary: format!(
                    "{kind} limit over `{label}`: {} tuple(s), checks {}",
                    report.tuples.len(),
                    if ok { "passed" } else { "FAILED" }
                ),
                value: limit_report_json(&label, &report, &cfg),
                code: if ok { 0 } else { 2 },
            })
        }
        Command::Verify {
            input,
            check,
            kind,
            family,
            subalgebra,
            ideal,
            spectrum,
        } => {
            let p = load(input, &cfg)?;
            let req = commands::VerifyRequest {
                kind,
                families: family,
                subalgebra,
                ideal: ideal.as_deref(),
                spectrum: spectrum.as_deref(),
            };
            let (value, passed) = match check {
                Check::Projection => commands::projection(&p, &req, &cfg)?,
                Check::Presentation => commands::presentation(&p, &req, &cfg)?,
                Check::Uniqueness => commands::uniqueness(&p, &req, &cfg)?,
                Check::Contract => commands::contract(&p, &req, &cfg)?,
            };
            let name = format!("{check:?}").to_lowercase();
            Ok(Report {
                summary: format!("{name}: {}", if passed { "pass" } else { "FAIL" }),
                value: json!({ "check": name, "passed": passed, "results": value }),
                code: if passed { 0 } else { 3 },
            })
        }
        Command::Corpus {
            seed,
            count,
            profile,
            max_space_dim,
            max_algebra_dim,
            out,
        } => {
            let profile: Profile = profile.parse()?;
            let spec = CorpusSpec::new(*seed, *count, *max_space_dim, *max_algebra_dim, profile)?;
            let manifest = write_corpus(&spec, out, &cfg)?;
            Ok(Report {
                summary: format!(
                    "wrote {} instance(s) to {}",
                    manifest.instances.len(),
                    out.display()
                ),
                value: serde_json::to_value(&manifest)?,
                code: 0,
            })
        }
    }
}
