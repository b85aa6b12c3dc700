use std::process::ExitCode;

use clap::Parser;
use fcgram_cli::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fcgram: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
