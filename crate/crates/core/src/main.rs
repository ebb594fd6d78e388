use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use critline::cli::{self, Overrides, RunConfig, EXIT_CONFIG};
use critline::hcatalog::EtaSign;
use critline::Result;

#[derive(Parser)]
#[command(name = "critline", version, about = "Critical-line zero verification for 1 + eta h(1-s)/h(s)")]
struct Args {
    #[command(subcommand)]
    verb: Verb,
    /// TOML run configuration
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// output directory (overrides output_dir)
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// line truncation height
    #[arg(long = "T", global = true)]
    t_max: Option<f64>,
    /// Gauss-Legendre nodes per unit panel
    #[arg(long = "N", global = true)]
    per_panel: Option<usize>,
    #[arg(long, global = true)]
    eta: Option<Eta>,
    /// t0,t1 for the line window or re0,re1,im0,im1 for the rectangle
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    window: Option<Vec<f64>>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Clone, Copy)]
enum Verb {
    /// hypothesis checks on h
    Check,
    /// zeros in the window by two methods
    Zeros,
    /// boundary identity at sample points
    Identity,
    /// discrete spectrum against the zeros
    Spectrum,
    /// cross-checks between independent methods
    Compare,
    /// summary of the artifacts in the output directory
    Report,
}

#[derive(ValueEnum, Clone, Copy)]
enum Eta {
    Plus,
    Minus,
}

fn run(args: &Args) -> Result<i32> {
    let Some(path) = &args.config else {
        return Err(critline::Error::Config("--config PATH is required".into()));
    };
    let overrides = Overrides {
        out: args.out.clone(),
        t_max: args.t_max,
        per_panel: args.per_panel,
        eta: args.eta.map(|e| match e {
            Eta::Plus => EtaSign::Plus,
            Eta::Minus => EtaSign::Minus,
        }),
        window: args.window.clone(),
        seed: args.seed,
    };
    let cfg = RunConfig::load(path)?.apply(&overrides)?;
    let status = match args.verb {
        Verb::Check => cli::cmd_check(&cfg),
        Verb::Zeros => cli::cmd_zeros(&cfg),
        Verb::Identity => cli::cmd_identity(&cfg),
        Verb::Spectrum => cli::cmd_spectrum(&cfg),
        Verb::Compare => cli::cmd_compare(&cfg),
        Verb::Report => cli::cmd_report(&cfg),
    }?;
    Ok(status.exit_code())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG as u8 } else { 0 });
        }
    };
    let code = match run(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("critline: {e}");
            cli::error_exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
