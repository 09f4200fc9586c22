use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use csalab::cli::{run, Flags};

fn main() -> ExitCode {
    let flags = Flags::parse();
    let out = run(&flags);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
