//! `nonfrac`: simulate, forecast and analyse aggregated AR(1) and
//! fractionally integrated series, and regenerate the experiment tables.

mod commands;
mod io;

use std::process::ExitCode;

use clap::Parser;

use commands::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nonfrac: {}", e.message());
            e.exit_code()
        }
    }
}
