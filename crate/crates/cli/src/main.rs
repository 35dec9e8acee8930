use std::process::ExitCode;

use blochring_cli::{execute, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help and version go to stdout and are not failures
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(written) => {
            for w in written {
                for warning in &w.warnings {
                    eprintln!("warning: {}: {warning}", w.path.display());
                }
                println!("{}", w.path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("blochring: {e}");
            e.into()
        }
    }
}
