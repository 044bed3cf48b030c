//! `cutpaste`: regenerate the channel, continuous-line and interferometer
//! results as CSV/JSON files with a manifest beside each output.
//!
//! Exit status is 0 on success, 2 for invalid input and 3 when the numerics
//! fail (inconsistent verdicts, no EB crossing, vanishing postselection).

mod continuous;
mod discrete;
mod experiment;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};

use crate::output::{Run, RunManifest};

#[derive(Debug, Parser)]
#[command(name = "cutpaste", version, about, args_override_self = true)]
struct Cli {
    /// Directory for CSV/JSON outputs and manifests.
    #[arg(long, global = true, default_value = "cutpaste-out")]
    out: PathBuf,

    /// Read and write angles in degrees.
    #[arg(long, global = true)]
    degrees: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// EB verdicts and orders for the discrete pair Φ = A∘U, Ψ = U†∘A.
    Discrete(discrete::DiscreteArgs),
    /// Concurrence profiles and EB lengths of switched Liouvillian lines.
    Continuous(continuous::ContinuousArgs),
    /// Angle sweeps of the three-interferometer setup.
    Experiment(experiment::ExperimentArgs),
    /// Re-run the command recorded in a manifest.
    Replay {
        #[arg(long)]
        manifest: PathBuf,
    },
}

fn execute(cli: &Cli, argv: &[String]) -> Result<()> {
    let name = match &cli.command {
        Command::Discrete(_) => "discrete",
        Command::Continuous(_) => "continuous",
        Command::Experiment(_) => "experiment",
        Command::Replay { manifest } => {
            let m = RunManifest::load(manifest)?;
            let mut replay_argv = m.argv.clone();
            replay_argv.push("--out".into());
            replay_argv.push(m.out_dir.to_string_lossy().into_owned());
            let inner = Cli::try_parse_from(std::iter::once("cutpaste".to_string()).chain(replay_argv.iter().cloned()))?;
            if matches!(inner.command, Command::Replay { .. }) {
                bail!("manifest {} records a replay", manifest.display());
            }
            return execute(&inner, &m.argv);
        }
    };
    let mut run = Run::start(&cli.out, name, argv)?;
    let params = match &cli.command {
        Command::Discrete(a) => discrete::run(a, &mut run)?,
        Command::Continuous(a) => continuous::run(a, &mut run)?,
        Command::Experiment(a) => experiment::run(a, cli.degrees, &mut run)?,
        Command::Replay { .. } => unreachable!(),
    };
    run.finish(params)?;
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<cutpaste_core::Error>() {
        return if e.is_numerical() { 3 } else { 2 };
    }
    if err.downcast_ref::<clap::Error>().is_some() {
        return 2;
    }
    1
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match execute(&cli, &argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
