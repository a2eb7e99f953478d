use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    ExitCode::from(annulus::run(annulus::Cli::parse()))
}
