use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use jamtol_cli::args::{Cli, Command};
use jamtol_cli::commands::{run_capability, run_simulate, run_sop, run_top};
use jamtol_cli::sweep::run_sweep;
use jamtol_cli::CliError;
use serde::Serialize;

fn emit<T: Serialize>(record: &T, out: Option<&Path>) -> Result<(), CliError> {
    let mut line = serde_json::to_string(record)?;
    line.push('\n');
    match out {
        Some(p) => fs::write(p, line).map_err(|e| CliError::Io {
            path: p.to_path_buf(),
            source: e,
        }),
        None => {
            print!("{line}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    match &cli.command {
        Command::Top(a) => emit(&run_top(a)?, a.out.out.as_deref()).map(|_| true),
        Command::Sop(a) => emit(&run_sop(a)?, a.out.out.as_deref()).map(|_| true),
        Command::Simulate(a) => emit(&run_simulate(a)?, a.out.out.as_deref()).map(|_| true),
        Command::Capability(a) => emit(&run_capability(a)?, a.out.out.as_deref()).map(|_| true),
        Command::Sweep(a) => {
            let summary = run_sweep(&a.spec, &a.out)?;
            emit(&summary, None)?;
            Ok(summary.failed_rows == 0)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Top(_) => "top",
        Command::Sop(_) => "sop",
        Command::Simulate(_) => "simulate",
        Command::Capability(_) => "capability",
        Command::Sweep(_) => "sweep",
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();

    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("jamtol: cannot configure {threads} threads: {e}");
            return ExitCode::from(2);
        }
    }

    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("jamtol: some sweep rows failed; see the error column");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("jamtol: {e}");
            if let Ok(line) = serde_json::to_string(&e.diagnostic(command_name(&cli.command))) {
                println!("{line}");
            }
            ExitCode::FAILURE
        }
    }
}
