use std::process::ExitCode;

use clap::Parser;
use cuspcount::cli::{error_json, execute, render, verify_summary, Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(out) => {
            if matches!(cli.command, Command::Verify(_)) {
                eprint!("{}", verify_summary(&out.report));
            }
            print!("{}", render(&out.report));
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => {
            eprint!("{}", render(&error_json(&e)));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
