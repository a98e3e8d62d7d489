//! `toda-topo` command-line front end.
//!
//! Exit status is 0 on success, 1 on a domain error or a failed check and 2
//! on a usage error. `TODA_TOPO_THREADS` limits the worker threads.

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};
use toda_topo_cli::config::Config;
use toda_topo_cli::{init_threads, run};

fn main() -> ExitCode {
    let config = match Config::try_parse_from(std::env::args_os()) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return ExitCode::SUCCESS;
            }
            // Value errors come without a synopsis; add the top-level one.
            if !e.to_string().contains("Usage:") {
                eprintln!("\n{}", Config::command().render_usage());
            }
            return ExitCode::from(2);
        }
    };
    if let Err(e) = init_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(&config) {
        Ok((out, passed)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
