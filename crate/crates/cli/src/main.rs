use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = clustnet_cli::commands::Cli::parse();
    match clustnet_cli::commands::run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
