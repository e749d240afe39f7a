use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use fuelpath::cli::{self, Format, RunConfig};

#[derive(Parser)]
#[command(name = "fuelpath", version, about = "Fuel pathway cost, carbon and credit reports")]
struct Args {
    #[command(subcommand)]
    command: Command,

    /// Dataset JSON. Falls back to the bundled dataset when neither this nor the env var is set.
    #[arg(long, global = true, env = "FUELPATH_DATASET")]
    dataset: Option<PathBuf>,

    /// Years of 45Z eligibility (0–15).
    #[arg(long, global = true)]
    z45_years: Option<u32>,

    /// LCFS credit price, $/t.
    #[arg(long, global = true, default_value_t = 0.0, allow_negative_numbers = true)]
    lcfs: f64,

    #[arg(long, global = true, allow_negative_numbers = true)]
    rin_d5: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    rin_d3: Option<f64>,
    /// Defaults to the D5 price.
    #[arg(long, global = true, allow_negative_numbers = true)]
    rin_d6: Option<f64>,

    /// Fossil jet price for the frontier, $/gal.
    #[arg(long, global = true, allow_negative_numbers = true)]
    fossil_price: Option<f64>,

    /// Let P6 claim both 45V and 45Q.
    #[arg(long, global = true)]
    p6_dual_credit: bool,

    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    #[arg(long, global = true, value_enum, default_value_t = Fmt::Csv)]
    format: Fmt,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Cost breakdowns for every pathway.
    Lcof,
    /// 45Z duration curves and the competitiveness frontier.
    Sweep,
    /// Mitigation cost, subsidy regression and CO2 sale breakeven.
    Lscm,
    /// Reference checks; exits 2 if any fails.
    Verify,
}

#[derive(ValueEnum, Clone, Copy)]
enum Fmt {
    Csv,
    Json,
}

fn run(args: Args) -> anyhow::Result<ExitCode> {
    let config = RunConfig {
        dataset_path: args.dataset,
        z45_years: args.z45_years,
        lcfs_price: args.lcfs,
        rin_d5: args.rin_d5,
        rin_d3: args.rin_d3,
        rin_d6: args.rin_d6,
        fossil_price: args.fossil_price,
        p6_dual_credit: args.p6_dual_credit,
        out_dir: args.out,
        format: match args.format {
            Fmt::Csv => Format::Csv,
            Fmt::Json => Format::Json,
        },
    };
    let written = match args.command {
        Command::Lcof => cli::cmd_lcof(&config).context("lcof")?,
        Command::Sweep => cli::cmd_sweep(&config).context("sweep")?,
        Command::Lscm => cli::cmd_lscm(&config).context("lscm")?,
        Command::Verify => {
            let report = cli::cmd_verify(&config).context("verify")?;
            print!("{}", report.render());
            return Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(2) });
        }
    };
    for p in written {
        println!("{}", p.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    // Exit code 2 is reserved for failed verification, so usage errors exit 1.
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
