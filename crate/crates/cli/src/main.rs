use std::process::ExitCode;

use clap::Parser;

mod cli;
mod commands;
mod manifest;
mod select;

use cli::Cli;

/// Exit codes: 0 success, 1 usage/config error, 2 runtime/numeric error.
fn main() -> ExitCode {
    let args = match Cli::try_parse() {
        Ok(args) => args,
        Err(err) => {
            // help/version are not errors
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };

    if let Ok(threads) = std::env::var("LUXBOT_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: LUXBOT_THREADS must be a positive integer");
                return ExitCode::from(1);
            }
        }
    }

    match commands::run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
