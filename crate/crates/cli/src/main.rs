use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use sbr_cli::{run_command, CommandConfig};

fn main() -> ExitCode {
    let cfg = CommandConfig::parse();
    let out = run_command(&cfg);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(out.code as u8)
}
