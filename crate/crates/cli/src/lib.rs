//! Library side of the `toda-topo` command-line tool: argument parsing and
//! the subcommands, each producing the text to print.

pub mod commands;
pub mod config;

use anyhow::{Context, Result};

use config::{Command, Config, RootsysCommand, TodaCommand};

/// Applies `TODA_TOPO_THREADS` to the global thread pool.
pub fn init_threads() -> Result<()> {
    let Ok(value) = std::env::var("TODA_TOPO_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .with_context(|| format!("TODA_TOPO_THREADS must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()?;
    Ok(())
}

/// Output text and whether the command succeeded.
pub fn run(config: &Config) -> Result<(String, bool)> {
    let caps = config.caps();
    let format = config.format();
    let ok = |s: String| (s, true);
    Ok(match &config.command {
        Command::Rootsys {
            action: RootsysCommand::Info(a),
        } => ok(commands::rootsys_info(a, &caps, format)?),
        Command::Cells(a) => ok(commands::cells(a, &caps, format)?),
        Command::Classify(a) => ok(commands::classify(a, &caps, format)?),
        Command::Homology(a) => ok(commands::homology(a, &caps, format)?),
        Command::Boundary(a) => ok(commands::boundary(a, &caps)?),
        Command::Verify(a) => commands::verify(a, &caps, format)?,
        Command::Toda {
            action: TodaCommand::Simulate(a),
        } => ok(commands::simulate(a, &caps, format)?),
    })
}
