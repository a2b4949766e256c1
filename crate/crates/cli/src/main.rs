use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use schubpf_cli::error::{EXIT_FAILURE, EXIT_INPUT};
use schubpf_cli::render::render;
use schubpf_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_INPUT as u8),
            };
        }
    };
    let doc = match run(&cli) {
        Ok(doc) => doc,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match render(&doc, cli.format) {
        Ok(s) => {
            let _ = std::io::stdout().lock().write_all(s.as_bytes());
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAILURE as u8);
        }
    }
    ExitCode::from(doc.exit_code() as u8)
}
