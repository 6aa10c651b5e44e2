use std::fs;
use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;

use args::{Cli, Format};
use commands::{Fail, Outcome};

fn emit(format: Format, outcome: Outcome) -> Result<i32, Fail> {
    Ok(match outcome {
        Outcome::Report(r) => {
            match format {
                Format::Json => println!("{}", r.to_json()),
                Format::Text => print!("{}", r.to_text()),
            }
            if r.pass { 0 } else { 1 }
        }
        Outcome::Suite(s) => {
            match format {
                Format::Json => println!("{}", s.to_json()),
                Format::Text => print!("{}", s.to_text()),
            }
            if s.pass { 0 } else { 1 }
        }
        Outcome::Value { json, text } => {
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&json).expect("values serialize")),
                Format::Text => println!("{text}"),
            }
            0
        }
        Outcome::Doc { body, out: Some(path) } => {
            fs::write(&path, body).map_err(|e| Fail { code: 2, message: format!("{}: {e}", path.display()) })?;
            0
        }
        Outcome::Doc { body, out: None } => {
            print!("{body}");
            0
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.max_n {
        ncprob::config::set_max_n(n);
    }
    if let Some(d) = cli.max_degree {
        ncprob::config::set_max_degree(d);
    }
    match commands::run(&cli).and_then(|o| emit(cli.format, o)) {
        Ok(code) => ExitCode::from(code as u8),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
