//! File formats, run configuration and subcommands behind the `annulus`
//! binary.

pub mod commands;
pub mod config;
pub mod formats;

use clap::{Parser, Subcommand};

use crate::config::Params;

#[derive(Debug, Parser)]
#[command(
    name = "annulus",
    version,
    about = "Constant mean curvature annuli tangent to spheres: generate, fit, verify"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a mesh and per-vertex curvature table for a surface family.
    Generate(Params),
    /// Fit an annulus tangent to two spheres, or to a sphere and a plane.
    Fit(Params),
    /// Write the parallel surface of a fixture as mesh, table and cloud.
    Offset(Params),
    /// Run the full check report on a fixture.
    Verify(Params),
    /// Look for a rotation axis in a point cloud.
    Symmetry(Params),
    /// Write the mesh, profile and offset cloud of a fixture.
    Export(Params),
}

/// Exit status: 0 when the command's checks pass, 1 when they ran and
/// failed, 2 on bad input.
pub fn run(cli: Cli) -> u8 {
    use commands::Outcome;
    let (params, f): (Params, fn(&config::RunConfig) -> anyhow::Result<Outcome>) = match cli.command
    {
        Command::Generate(p) => (p, commands::generate),
        Command::Fit(p) => (p, commands::fit),
        Command::Offset(p) => (p, commands::offset_cmd),
        Command::Verify(p) => (p, commands::verify),
        Command::Symmetry(p) => (p, commands::symmetry),
        Command::Export(p) => (p, commands::export),
    };
    match params.resolve().and_then(|cfg| f(&cfg)) {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Fail) => 1,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}
