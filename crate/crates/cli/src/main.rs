use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use hypercat_cli::{run, Cli, Failure};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(&cli, &mut out);
    let flushed = out.flush().map_err(Failure::from);
    match result.and(flushed) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("hypercat: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
