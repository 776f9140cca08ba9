use std::process::ExitCode;

use clap::Parser;

use scarmps_tools::cli::{self, Cli};

fn main() -> ExitCode {
    let args = Cli::parse();
    match cli::run(&args) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("scarmps: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
