use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use wachlab_core::{FamilySpec, FamilyType, Fixture};

mod audit;
mod render;
mod sweep;

#[derive(Parser, Debug)]
#[command(name = "wachlab", version, about = "Mod-p reductions of crystalline representations, computed exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyze one family member or fixture.
    Analyze(AnalyzeArgs),
    /// Analyze every weight/type combination in a range.
    Sweep(SweepArgs),
    /// Regression run over both f = 2 fixtures.
    Fixtures(FixturesArgs),
    /// Compare the closed-form irreducibility test with exhaustive search.
    OracleAudit(AuditArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Series truncation order for the Wach checks.
    #[arg(long, env = "WACHLAB_TRUNC")]
    trunc: Option<usize>,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[arg(short)]
    p: u64,
    /// Residue degree; defaults to the number of weights.
    #[arg(short)]
    f: Option<usize>,
    /// Weights k_0,...,k_{f-1}.
    #[arg(short, value_delimiter = ',', required = true)]
    k: Vec<i64>,
    /// Types in 1..=4 (or I..IV), one per weight.
    #[arg(long, value_delimiter = ',', value_parser = parse_type)]
    types: Vec<FamilyType>,
    /// Use the f = 2 fixture 25 or 28 instead of a typed family.
    #[arg(long, value_parser = parse_fixture, conflicts_with = "types")]
    family: Option<Fixture>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(short)]
    pub p: u64,
    #[arg(short)]
    pub f: usize,
    #[arg(long, default_value_t = 1)]
    pub k_min: i64,
    #[arg(long, default_value_t = 4)]
    pub k_max: i64,
    /// Fix the type vector instead of running all 4^f of them.
    #[arg(long, value_delimiter = ',', value_parser = parse_type)]
    pub types: Vec<FamilyType>,
    #[arg(long, value_parser = parse_fixture, conflicts_with = "types")]
    pub family: Option<Fixture>,
    /// Analyze this many instances drawn without replacement.
    #[arg(long)]
    pub sample: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Refuse to run more instances than this.
    #[arg(long, default_value_t = 100_000)]
    pub cap: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
pub struct FixturesArgs {
    #[arg(short, value_delimiter = ',', default_values_t = [3u64, 5])]
    pub p: Vec<u64>,
    #[arg(long, default_value_t = 6)]
    pub k_max: i64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
pub struct AuditArgs {
    #[arg(short)]
    pub p: u64,
    #[arg(short)]
    pub f: u32,
    /// Largest p^(2f) to enumerate; at most 10^7.
    #[arg(long, default_value_t = 100_000)]
    pub cap: u128,
    #[command(flatten)]
    common: Common,
}

fn parse_type(s: &str) -> Result<FamilyType, String> {
    let n = match s.trim() {
        "I" | "i" => 1,
        "II" | "ii" => 2,
        "III" | "iii" => 3,
        "IV" | "iv" => 4,
        other => other.parse::<u8>().map_err(|_| format!("bad type '{other}'; expected 1-4 or I-IV"))?,
    };
    FamilyType::try_from(n).map_err(|e| e.to_string())
}

fn parse_fixture(s: &str) -> Result<Fixture, String> {
    let n: u16 = s.trim().parse().map_err(|_| format!("bad family '{s}'; expected 25 or 28"))?;
    Fixture::try_from(n).map_err(|e| e.to_string())
}

/// A command either ran cleanly or found a mathematical inconsistency.
pub enum Outcome {
    Valid,
    Inconsistent,
}

/// Errors the core raises for inputs it cannot handle, as opposed to a broken computation.
fn is_input_error(err: &anyhow::Error) -> bool {
    use wachlab_core::Error as E;
    match err.downcast_ref::<E>() {
        Some(e) => matches!(
            e,
            E::InvalidSpec(_)
                | E::EvenDegree(_)
                | E::UnsupportedShape(_)
                | E::TooLarge { .. }
                | E::TruncationTooShallow { .. }
                | E::Parse(_)
                | E::Overflow(_)
        ),
        None => true,
    }
}

pub fn open_output(path: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("--output {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run_analyze(args: AnalyzeArgs) -> anyhow::Result<Outcome> {
    let spec = match args.family {
        Some(fx) => {
            if args.f.is_some_and(|f| f != 2) {
                bail!("-f must be 2 with --family");
            }
            if args.k.len() != 2 {
                bail!("-k needs two weights with --family, got {}", args.k.len());
            }
            FamilySpec::fixture(args.p, fx, args.k[0], args.k[1])
        }
        None => {
            let f = args.f.unwrap_or(args.k.len());
            if args.k.len() != f {
                bail!("-k has {} weights but -f is {f}", args.k.len());
            }
            if args.types.len() != f {
                bail!("--types needs {f} entries (one per weight), got {}", args.types.len());
            }
            FamilySpec::general(args.p, args.types, args.k)
        }
    };
    let opts = wachlab_core::AnalyzeOptions { trunc: args.common.trunc };
    let report = wachlab_core::analyze(&spec, &opts)?;
    let mut out = open_output(&args.common.output)?;
    render::report(&mut out, &report, args.common.format)?;
    out.flush()?;
    Ok(if report.valid { Outcome::Valid } else { Outcome::Inconsistent })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => run_analyze(a),
        Command::Sweep(a) => {
            let common = a.common.clone();
            sweep::run(&a, common.format, common.trunc, &common.output)
        }
        Command::Fixtures(a) => {
            let common = a.common.clone();
            sweep::run_fixtures(&a, common.format, common.trunc, &common.output)
        }
        Command::OracleAudit(a) => audit::run(&a, a.common.format, &a.common.output),
    };
    match result {
        Ok(Outcome::Valid) => ExitCode::SUCCESS,
        Ok(Outcome::Inconsistent) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_input_error(&e) { 1 } else { 2 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn math_errors_are_not_input_errors() {
        let math = anyhow::Error::new(wachlab_core::Error::NotDiagonal(1)).context("p=3 k=[1]");
        assert!(!is_input_error(&math));
        let input = anyhow::Error::new(wachlab_core::Error::EvenDegree(2));
        assert!(is_input_error(&input));
        assert!(is_input_error(&anyhow::anyhow!("-k has 2 weights but -f is 3")));
    }

    #[test]
    fn type_names() {
        assert_eq!(parse_type("III").unwrap(), FamilyType::III);
        assert_eq!(parse_type("2").unwrap(), FamilyType::II);
        assert!(parse_type("0").is_err());
        assert!(parse_fixture("26").is_err());
    }
}
