mod args;
mod commands;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Common};

const EXIT_MISMATCH: u8 = 2;
const EXIT_INVALID: u8 = 4;
const EXIT_IO: u8 = 1;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_INVALID),
            };
        }
    };

    let (common, outcome): (&Common, _) = match &cli.command {
        Command::Table(c) => (c, commands::table(c)),
        Command::Spectrum(c) => (c, commands::spectrum(c)),
        Command::Verify(v) => (&v.common, commands::verify(v)),
        Command::CountString(a) => (&a.common, commands::count_string_cmd(a)),
        Command::ClosedForms(c) => (c, commands::closed_forms(c)),
    };

    let report = match outcome {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}", e.message());
            return ExitCode::from(e.exit_code());
        }
    };

    let written = match &common.out {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            report.render(common.format, &mut w)?;
            w.flush()
        }),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            report.render(common.format, &mut lock)
        }
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_IO);
    }

    if report.passed() {
        ExitCode::SUCCESS
    } else {
        for c in report.checks.iter().filter(|c| !c.passed) {
            eprintln!("check failed: {}: {}", c.name, c.detail);
        }
        ExitCode::from(EXIT_MISMATCH)
    }
}
