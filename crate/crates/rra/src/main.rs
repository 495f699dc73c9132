use std::process::ExitCode;

use clap::Parser;
use rra::Cli;

fn main() -> ExitCode {
    match rra::run(Cli::parse()) {
        Ok(outcome) => {
            println!("{}", outcome.message);
            for path in &outcome.written {
                println!("wrote {}", path.display());
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("{}", serde_json::json!({ "error": { "kind": "check", "message": outcome.message } }));
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::FAILURE
        }
    }
}
