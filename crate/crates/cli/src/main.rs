//! `tangenocchi`: print tangent/Genocchi-type sequences, pivot-class tables
//! and residues, and run the divisibility verification suites.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage error,
//! 3 a resource budget would be exceeded.

mod commands;
mod output;

use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tangenocchi::registry::Scope;
use tangenocchi::{Budget, Error};

use output::{Format, Status};

#[derive(Parser, Debug)]
#[command(name = "tangenocchi", version, about = "Exact tangent and Genocchi numbers and their k-ary generalizations")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,

    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print one sequence for n = 0..=n-max.
    Seq {
        #[arg(long, value_parser = ["tangent", "genocchi", "l", "m", "fuss-catalan", "f"])]
        kind: String,
        /// Arity; required by l, m, fuss-catalan and f.
        #[arg(long)]
        k: Option<u64>,
        #[arg(long, default_value_t = 6)]
        n_max: u64,
    },
    /// Pivot classes of complete k-ary trees with n internal nodes.
    Classes {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: u64,
    },
    /// Run verification checks; exits 1 if any fails.
    Verify {
        #[arg(long, value_enum, default_value_t = ScopeArg::All)]
        scope: ScopeArg,
        /// Inclusive, e.g. 2..4 or 2..=4.
        #[arg(long, value_parser = parse_range, default_value = "2..4")]
        k_range: RangeInclusive<u64>,
        /// Inclusive; each check picks its own default when omitted.
        #[arg(long, value_parser = parse_range)]
        n_range: Option<RangeInclusive<u64>>,
    },
    /// Residues of M modulo k and any period visible in them.
    Residues {
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 8)]
        n_max: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScopeArg {
    All,
    Theorem1,
    Theorem2,
    Theorem3,
    Lemmas,
}

impl ScopeArg {
    fn scopes(self) -> Vec<Scope> {
        match self {
            ScopeArg::All => Scope::ALL.to_vec(),
            ScopeArg::Theorem1 => vec![Scope::Theorem1],
            ScopeArg::Theorem2 => vec![Scope::Theorem2],
            ScopeArg::Theorem3 => vec![Scope::Theorem3],
            ScopeArg::Lemmas => vec![Scope::Lemmas],
        }
    }

    fn name(self) -> &'static str {
        match self {
            ScopeArg::All => "all",
            ScopeArg::Theorem1 => "theorem1",
            ScopeArg::Theorem2 => "theorem2",
            ScopeArg::Theorem3 => "theorem3",
            ScopeArg::Lemmas => "lemmas",
        }
    }
}

#[derive(Args, Debug)]
struct BudgetArgs {
    /// Most tree shapes one enumeration may produce.
    #[arg(long, global = true, env = "TANGENOCCHI_BUDGET_SHAPES", default_value_t = Budget::default().max_shapes)]
    budget_shapes: u64,
    /// Largest m for which m! may be formed.
    #[arg(long, global = true, env = "TANGENOCCHI_BUDGET_FACTORIAL", default_value_t = Budget::default().max_factorial)]
    budget_factorial: u64,
    /// Most compositions visited per L entry.
    #[arg(long, global = true, env = "TANGENOCCHI_BUDGET_COMPOSITIONS", default_value_t = Budget::default().max_compositions)]
    budget_compositions: u64,
    #[arg(long, global = true, env = "TANGENOCCHI_BUDGET_ORACLE_BINARY", default_value_t = Budget::default().oracle_vertices_binary)]
    budget_oracle_binary: u64,
    #[arg(long, global = true, env = "TANGENOCCHI_BUDGET_ORACLE_TERNARY", default_value_t = Budget::default().oracle_vertices_ternary)]
    budget_oracle_ternary: u64,
    #[arg(long, global = true, env = "TANGENOCCHI_BUDGET_ORACLE_WIDE", default_value_t = Budget::default().oracle_vertices_wide)]
    budget_oracle_wide: u64,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget {
            max_shapes: self.budget_shapes,
            max_factorial: self.budget_factorial,
            max_compositions: self.budget_compositions,
            oracle_vertices_binary: self.budget_oracle_binary,
            oracle_vertices_ternary: self.budget_oracle_ternary,
            oracle_vertices_wide: self.budget_oracle_wide,
        }
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    let parse = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("{t:?} is not a non-negative integer"));
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (parse(lo)?, parse(hi.strip_prefix('=').unwrap_or(hi))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok(lo..=hi)
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Lib(Error::InvalidInput(_)) => 2,
            CliError::Lib(Error::Budget { .. }) => 3,
            CliError::Lib(Error::Verification(_) | Error::Invariant(_)) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage: {msg}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = cli.budget.budget();

    let result = match cli.command {
        Command::Seq { kind, k, n_max } => commands::seq(&kind, k, n_max, &budget),
        Command::Classes { k, n } => commands::classes(k, n, &budget),
        Command::Verify { scope, k_range, n_range } => {
            commands::verify(&scope.scopes(), scope.name(), k_range, n_range, &budget)
        }
        Command::Residues { k, n_max } => commands::residues(k, n_max, &budget),
    };

    match result {
        Ok(record) => {
            let mut stdout = io::stdout().lock();
            if let Err(e) = record.write(cli.format, &mut stdout).and_then(|_| stdout.flush()) {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    eprintln!("error: writing output: {e}");
                    return ExitCode::from(1);
                }
            }
            if record.status == Status::Fail {
                for row in record.rows.iter().filter(|r| r[2] == "fail".into()) {
                    eprintln!("check failed: {} [{}]: {}", row[0].render(), row[1].render(), row[3].render());
                }
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
