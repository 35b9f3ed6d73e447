use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use secwipt::cli::{self, CliError, EXIT_CONFIG};

#[derive(Parser)]
#[command(name = "secwipt", version, about = "Secrecy SWIPT and WPCN experiment runner")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its CSV results.
    Run {
        config: PathBuf,
        /// Output path; overrides `output` in the config. Stdout when neither is set.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides `seed` in the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for the sweep.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Check a scenario without running it.
    Validate { config: PathBuf },
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run {
            config,
            out,
            seed,
            threads,
        } => {
            let mut scenario = cli::load_config(&config)?;
            if let Some(seed) = seed {
                scenario.seed = seed;
            }
            if threads == Some(0) {
                return Err(CliError::Parse("--threads must be >= 1".into()));
            }
            let csv = cli::run_with_threads(&scenario, threads)?.to_csv();
            match out.or(scenario.output) {
                Some(path) => {
                    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                        std::fs::create_dir_all(dir)?;
                    }
                    std::fs::write(path, csv)?;
                }
                None => print!("{csv}"),
            }
            Ok(())
        }
        Command::Validate { config } => {
            let violations = cli::load_config(&config)?.validate();
            if violations.is_empty() {
                println!("ok");
                Ok(())
            } else {
                Err(CliError::Invalid(violations))
            }
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG as u8 } else { 0 });
        }
    };
    match execute(args.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
