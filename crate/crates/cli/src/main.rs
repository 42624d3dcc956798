use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serrehom_cli::{run, Cli, EXIT_INTERNAL};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(EXIT_INTERNAL);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
