use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use smoothcond_cli::{config_from_report, run, CliError, Command, Format, Outcome, RunConfig};

#[derive(Parser)]
#[command(name = "smoothcond", version, about = "Smoothed condition numbers of rectangular Gaussian matrices")]
struct Cli {
    /// Worker threads (defaults to all cores). Never changes results.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the report here and print only a summary line.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Top,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Top {
    #[command(flatten)]
    Run(Command),
    /// Re-run the configuration embedded in a JSON report.
    Replay { report: PathBuf },
}

fn execute(cli: Cli) -> Result<Outcome, CliError> {
    let cfg = match cli.command {
        Top::Run(command) => RunConfig {
            command,
            format: cli.format,
        },
        Top::Replay { report } => {
            let text = std::fs::read_to_string(&report)
                .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", report.display())))?;
            config_from_report(&text)?
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| CliError::Runtime(e.to_string()))?;
    let outcome = pool.install(|| run(&cfg))?;
    match &cli.out {
        Some(path) => {
            std::fs::write(path, &outcome.output)
                .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
            println!("{}", outcome.summary);
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(outcome.output.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            eprintln!("{}", outcome.summary);
        }
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(o) => ExitCode::from(o.exit_code() as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
