use std::io;
use std::process::ExitCode;

use clap::Parser;
use dhol_cli::{emit, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    let out = run(&cli);
    if let Err(e) = emit(&cli, &out, &mut io::stdout().lock()) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(out.code as u8)
}
