use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use u1cs_cli::{run, Cli, EXIT_OK};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = match run(&cli, &mut out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = out.flush();
            eprintln!("{e}");
            e.exit_code()
        }
    };
    let _ = out.flush();
    ExitCode::from(code)
}
