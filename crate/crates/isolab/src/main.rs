use std::io::Write;
use std::process::ExitCode;

use isolab::cli::{run, MAX_DIM_ENV};

fn main() -> ExitCode {
    let cap = std::env::var(MAX_DIM_ENV).ok();
    let out = run(std::env::args_os(), cap.as_deref());
    // Ignore broken pipes; the exit code still reports the outcome.
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
