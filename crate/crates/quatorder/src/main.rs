//! Command-line interface to the quaternion-order toolkit.
//!
//! Thin dispatch layer: every report body lives in [`quatorder::report`]
//! where it is unit-tested; this file only parses arguments, reads and
//! writes files, and maps errors to exit codes via [`Error::exit_code`]
//! (0 success, 2 parse, 3 semantic, 4 precondition, 1 internal).

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use quatorder::report::{
    classset_report, info_report, parse_order_json, render_table, run_verify, stclgrp_report,
    suborders_report, TableFormat, VerifySuite,
};
use quatorder::search::classify_all_z;
use quatorder::{Error, Order, Result};

#[derive(Parser)]
#[command(
    name = "quatorder",
    version,
    about = "Invariants and classification of definite quaternion orders over the integers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the invariants of one order: discriminants, symbols, labels,
    /// mass, class numbers, and the Hermite and cancellation flags.
    Info {
        /// Path to an order file (JSON).
        #[arg(long)]
        order: PathBuf,
    },
    /// Run the full classification over the integers and write the table
    /// of definite Hermite orders.
    Classify {
        /// Output file for the table.
        #[arg(long)]
        out: PathBuf,
        /// Table format.
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
        /// Worker threads (defaults to QUATORDER_JOBS, then all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Dump right-ideal class representatives as JSON lines, or the
    /// p-neighbors of the unit ideal when --neighbors is given.
    Classset {
        /// Path to an order file (JSON).
        #[arg(long)]
        order: PathBuf,
        /// Dump the neighbors at this prime instead of the class set.
        #[arg(long, value_name = "P")]
        neighbors: Option<u64>,
    },
    /// Dump the stable class group: size, level, local factors, elements.
    Stclgrp {
        /// Path to an order file (JSON).
        #[arg(long)]
        order: PathBuf,
    },
    /// Dump conjugacy classes of proper p-suborders up to a given index.
    Suborders {
        /// Path to an order file (JSON).
        #[arg(long)]
        order: PathBuf,
        /// Prime at which to pass to suborders.
        #[arg(long)]
        prime: u64,
        /// Largest admitted index of a suborder in the parent.
        #[arg(long)]
        max_index: u64,
    },
    /// Cross-check computed invariants; nonzero exit on any violation.
    Verify {
        /// Which suite to run.
        #[arg(long, value_enum)]
        suite: SuiteArg,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Text,
}

impl From<FormatArg> for TableFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => TableFormat::Csv,
            FormatArg::Json => TableFormat::JsonLines,
            FormatArg::Text => TableFormat::Text,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Masses,
    Vigneras,
    Fibers,
    Table,
}

impl From<SuiteArg> for VerifySuite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Masses => VerifySuite::Masses,
            SuiteArg::Vigneras => VerifySuite::Vigneras,
            SuiteArg::Fibers => VerifySuite::Fibers,
            SuiteArg::Table => VerifySuite::Table,
        }
    }
}

fn read_order(path: &Path) -> Result<Order> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_order_json(&text)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Info { order } => {
            print!("{}", info_report(&read_order(&order)?)?);
        }
        Command::Classify { out, format, jobs } => {
            let jobs = jobs.or_else(|| {
                std::env::var("QUATORDER_JOBS")
                    .ok()
                    .and_then(|v| v.parse().ok())
            });
            let records = match jobs {
                Some(k) => rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build()
                    .map_err(|e| Error::Io(format!("thread pool: {e}")))?
                    .install(classify_all_z)?,
                None => classify_all_z()?,
            };
            let table = render_table(&records, format.into());
            fs::write(&out, table).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
            println!("wrote {} records to {}", records.len(), out.display());
        }
        Command::Classset { order, neighbors } => {
            let order = Arc::new(read_order(&order)?);
            print!("{}", classset_report(&order, neighbors)?);
        }
        Command::Stclgrp { order } => {
            print!("{}", stclgrp_report(&read_order(&order)?)?);
        }
        Command::Suborders {
            order,
            prime,
            max_index,
        } => {
            print!("{}", suborders_report(&read_order(&order)?, prime, max_index)?);
        }
        Command::Verify { suite } => {
            let outcome = run_verify(suite.into())?;
            println!("{}", outcome.report);
            if !outcome.passed {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
