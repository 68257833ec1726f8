use std::process::ExitCode;

use clap::Parser;
use fracplanar::cli::{is_broken_pipe, run, Cli};

fn main() -> ExitCode {
    // clap exits with 2 on bad arguments, which this tool reserves for
    // "not stable"; argument errors use 1 like every other failure.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        // Output piped into `head` and the like is not a failure.
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
