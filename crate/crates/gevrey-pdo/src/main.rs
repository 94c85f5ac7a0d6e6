//! Command-line front end: `gevrey-pdo run | list-suites | validate-config`.
//! The process exits nonzero iff at least one record fails (exit code 1),
//! or with code 2 on configuration and usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gevrey_pdo::config::SuiteConfig;
use gevrey_pdo::report::{emit_report, summary, ReportFormat};
use gevrey_pdo::suites::{run_suite, Suite};

#[derive(Parser)]
#[command(name = "gevrey-pdo", about = "Verification suites for the Gevrey operator calculus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one suite and write its report.
    Run {
        #[arg(long, value_enum)]
        suite: Suite,
        /// TOML configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides the config's output_dir).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed override.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: ReportFormat,
    },
    /// List the available suites.
    ListSuites,
    /// Validate a configuration file against the declared domains.
    ValidateConfig { path: PathBuf },
}

fn main() -> ExitCode {
    match run() {
        Ok(all_passed) => {
            if all_passed {
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

fn run() -> anyhow::Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::ListSuites => {
            for s in Suite::all() {
                println!("{}", s.name());
            }
            Ok(true)
        }
        Command::ValidateConfig { path } => {
            let cfg = SuiteConfig::load(&path)?;
            println!(
                "ok: schema_version {}, seed {}, grid d={} n={} len={}",
                cfg.schema_version, cfg.seed, cfg.grid.d, cfg.grid.n, cfg.grid.len
            );
            Ok(true)
        }
        Command::Run { suite, config, out, seed, format } => {
            let mut cfg = SuiteConfig::load(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let dir = out
                .or_else(|| cfg.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("reports"));
            let records = run_suite(&cfg, suite)?;
            let written = emit_report(suite.name(), &records, &dir, format)?;
            print!("{}", summary(&records));
            for p in written {
                println!("wrote {}", p.display());
            }
            Ok(records.iter().all(|r| r.pass))
        }
    }
}
