use std::process::ExitCode;

use clap::Parser;
use cv_entangle_cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
