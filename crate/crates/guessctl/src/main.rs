mod cli;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use cli::Cli;
use commands::Status;

const EXIT_VALIDATION: u8 = 1;
const EXIT_RESOURCE_GUARD: u8 = 2;
const EXIT_TREND_FAILURE: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_VALIDATION)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(&cli) {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::TrendFailure) => ExitCode::from(EXIT_TREND_FAILURE),
        Err(err) => {
            eprintln!("error: {err:#}");
            let guard = err
                .downcast_ref::<guesswork::Error>()
                .is_some_and(|e| e.is_resource_guard());
            ExitCode::from(if guard {
                EXIT_RESOURCE_GUARD
            } else {
                EXIT_VALIDATION
            })
        }
    }
}
