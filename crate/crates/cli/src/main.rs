mod args;
mod commands;
mod common;
mod suite;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use common::{emit, CmdResult, Failure, Outcome};

fn run(cli: &Cli) -> CmdResult<i32> {
    let (outcome, out): (Outcome, _) = match &cli.command {
        Command::Rep(c) => (commands::rep(c)?, &c.out),
        Command::Verify(c) => (commands::verify(c)?, &c.out),
        Command::Symbolic(c) => (commands::symbolic(c)?, &c.out),
        Command::Spectrum(c) => (commands::spectrum(c)?, &c.out),
        Command::Ladder(c) => (commands::ladder(c)?, &c.out),
        Command::Unitarize(c) => (commands::unitarize(c)?, &c.out),
        Command::Intersect(c) => (commands::intersect(c)?, &c.out),
        Command::Suite(c) => (suite::suite(c)?, &c.out),
    };
    emit(&outcome, out.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Failure::Usage(_) => 2,
                Failure::Compute(_) => 1,
            })
        }
    }
}
