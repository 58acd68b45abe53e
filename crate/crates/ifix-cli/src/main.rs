mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use ifix::fixtures::FixtureSet;
use ifix::lieorders::Exceptional;
use num_bigint::BigInt;

use commands::{AlmostSimpleArgs, ParabolicArgs};
use report::Report;

/// Involution fixity of finite exceptional groups: engines, oracle and table checks.
#[derive(Parser, Debug)]
#[command(name = "ifix", version)]
struct Cli {
    /// Print JSON instead of markdown tables.
    #[arg(long, global = true)]
    json: bool,
    /// Fixture directory (default: $IFIX_DATA_DIR, then the bundled data).
    #[arg(long, global = true, value_name = "DIR")]
    data_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fixed points of an involution on the cosets of a parabolic subgroup.
    Parabolic {
        #[arg(long)]
        group: Exceptional,
        /// Removed Dynkin nodes (Bourbaki labels), e.g. `1` or `1,6`.
        #[arg(long, value_delimiter = ',', required_unless_present = "borel")]
        nodes: Vec<usize>,
        /// The Borel subgroup.
        #[arg(long, conflicts_with = "nodes")]
        borel: bool,
        /// Class label from the involution table; default is the class with most fixed points.
        #[arg(long)]
        class: Option<String>,
        /// One or more field sizes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
        /// Also print chi(t) as a polynomial in q.
        #[arg(long)]
        symbolic: bool,
    },
    /// Brute-force a small permutation action.
    Oracle {
        /// Built-in group id, e.g. `L2(8)`.
        #[arg(long, required_unless_present = "case")]
        group: Option<String>,
        /// `sylow-normalizer:p`, `cyclic-normalizer:m`, `whole` or `trivial`.
        #[arg(long, required_unless_present = "case")]
        subgroup: Option<String>,
        /// An encoded oracle case such as `tab:small:2`.
        #[arg(long, conflicts_with_all = ["group", "subgroup"])]
        case: Option<String>,
    },
    /// Reproduce and check every row of an encoded table, e.g. `tab-main3`.
    Table {
        name: String,
        /// Field sizes per row.
        #[arg(long, default_value_t = 3)]
        points: usize,
    },
    /// Exponent bounds from numeric inputs.
    Bound {
        #[command(subcommand)]
        mode: BoundMode,
    },
    /// Fixed-subvariety dimension ratios for the algebraic groups.
    Dims {
        #[arg(long)]
        group: Option<Exceptional>,
    },
    /// Load every fixture, run the gate and the coverage check.
    FixturesValidate {
        #[arg(long, default_value_t = 3)]
        points: usize,
    },
}

#[derive(Subcommand, Debug)]
enum BoundMode {
    /// `ifix >= n a / b` with `n >= d / c`.
    AlmostSimple {
        /// Largest involution class of the socle S.
        #[arg(long)]
        a: Option<BigInt>,
        /// Largest involution class of T (default: from --group and --q).
        #[arg(long)]
        b: Option<BigInt>,
        /// `|Aut(S)|`, or any upper bound on `|H|`.
        #[arg(long)]
        c: Option<BigInt>,
        /// `|T|` (default: from --group and --q).
        #[arg(long)]
        d: Option<BigInt>,
        #[arg(long)]
        group: Option<Exceptional>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, default_value = "4/9")]
        alpha: String,
    },
    /// Evaluate an encoded row `ifix >= |T| / (f |t^T|)`.
    MaximalRank {
        /// Fixture id, e.g. `tab:mr20:5`.
        #[arg(long)]
        row: String,
        #[arg(long, value_delimiter = ',')]
        q: Vec<u64>,
        #[arg(long, default_value_t = 3)]
        points: usize,
    },
}

fn run(cli: &Cli) -> Result<Report> {
    let set = match &cli.data_dir {
        Some(dir) => FixtureSet::load(dir)?,
        None => FixtureSet::load_default()?,
    };
    match &cli.command {
        Command::Parabolic { group, nodes, borel, class, q, symbolic } => commands::parabolic(
            &set,
            &ParabolicArgs { group: *group, nodes: nodes.clone(), borel: *borel, class: class.clone(), q: q.clone(), symbolic: *symbolic },
        ),
        Command::Oracle { group, subgroup, case } => commands::oracle(&set, group.as_deref(), subgroup.as_deref(), case.as_deref()),
        Command::Table { name, points } => commands::table(&set, name, *points),
        Command::Bound { mode: BoundMode::AlmostSimple { a, b, c, d, group, q, alpha } } => commands::bound_almost_simple(
            &set,
            &AlmostSimpleArgs { a: a.clone(), b: b.clone(), c: c.clone(), d: d.clone(), group: *group, q: *q, alpha: alpha.clone() },
        ),
        Command::Bound { mode: BoundMode::MaximalRank { row, q, points } } => commands::bound_maximal_rank(&set, row, q, *points),
        Command::Dims { group } => commands::dims(&set, *group),
        Command::FixturesValidate { points } => commands::fixtures_validate(&set, *points),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("json"));
            } else {
                print!("{}", report.to_markdown());
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
