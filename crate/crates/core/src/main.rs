use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use asymfix::cli::{run_scenario, run_suite, to_json};

#[derive(Parser)]
#[command(name = "asymfix", version, about = "Run fixed-point scenarios in asymmetric spaces")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file and print its summary JSON.
    Run { path: PathBuf },
    /// Run every *.scenario.json in a directory and print the aggregate JSON.
    Suite { dir: PathBuf },
}

fn main() -> ExitCode {
    let code = match Args::parse().command {
        Command::Run { path } => {
            let out = run_scenario(&path);
            if let Some(err) = out.summary.diagnostics.get("error").filter(|_| out.exit_code == 2) {
                eprintln!("error: {}", err.as_str().unwrap_or_default());
            }
            println!("{}", to_json(&out.summary));
            out.exit_code
        }
        Command::Suite { dir } => {
            let out = run_suite(&dir);
            if let Some(err) = &out.error {
                eprintln!("error: {err}");
            }
            println!("{}", out.to_json());
            out.exit_code
        }
    };
    ExitCode::from(code as u8)
}
