use std::io;
use std::process::ExitCode;

use clap::Parser;
use npls::cli::{run, RunConfig};

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    ExitCode::from(run(
        &cfg,
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    ))
}
