use std::io::Write;
use std::process::ExitCode;

use alg::cli::{error_code, exit_code, run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.render(cli.json).as_bytes());
            ExitCode::from(exit_code(out.status) as u8)
        }
        Err(e) => {
            eprintln!("alg: {e}");
            ExitCode::from(error_code(&e) as u8)
        }
    }
}
