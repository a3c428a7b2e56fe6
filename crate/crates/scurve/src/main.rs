use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use scurve::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = match scurve::run(&cli, &mut out) {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("error: a numerical optimization did not converge; results above are unreliable");
            4
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}
