//! `omd`: command-line front end for the OMD engine.
//!
//! Exit codes: 0 success, 1 usage, parse or validation error, 2 inconsistent
//! ontology, 3 chase budget exhausted.

mod args;
mod data;
mod report;
mod run;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() {
                run::EXIT_ERROR
            } else {
                run::EXIT_OK
            };
            return ExitCode::from(code);
        }
    };
    let code = run::run(
        &cli,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code)
}
