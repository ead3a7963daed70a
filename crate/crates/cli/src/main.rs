mod args;
mod commands;
mod error;
mod output;
mod table;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;
use output::Sink;

fn run(cli: Cli) -> Result<(), CliError> {
    let global = &cli.global;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = global.workers {
        if n == 0 {
            return Err(CliError::Input("--workers must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Numeric(format!("worker pool: {e}")))?;
    let sink = Sink::new(global.out_dir.clone(), global.format)?;
    pool.install(|| match &cli.command {
        Command::Spectrum => commands::spectrum(global, &sink),
        Command::Verify => commands::verify(global, &sink),
        Command::Sweep(a) => commands::sweep(global, a, &sink),
        Command::Oracle(a) => commands::oracle(global, a, &sink),
        Command::Colorings(a) => commands::colorings(global, a, &sink),
        Command::Circuit(a) => commands::circuit(global, a, &sink),
    })
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help and version requests are not errors
            std::process::exit(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {}", e.message());
        std::process::exit(e.exit_code());
    }
}
