mod args;
mod commands;
mod error;
mod output;

use clap::Parser;

use args::Cli;
use error::CliError;

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    commands::dispatch(cli.command)
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        let msg = e.to_string().replace('\n', " ");
        eprintln!("error[{}]: {msg}", e.code());
        std::process::exit(e.exit_code());
    }
}
