use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use gnrstep::{run, Command, RunConfig, RunError, RunOptions};

/// Quantum transport through step-bent armchair graphene nanoribbons.
#[derive(Parser)]
#[command(name = "gnrstep", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write the device geometry (geometry.xyz, geometry.json).
    Build(Common),
    /// Transmission spectra, one T_vb{mV}.csv per bias.
    Transmission(Common),
    /// Local density of states on selected atoms (ldos.csv, ldos_sampling.json).
    Ldos(Common),
    /// Current-voltage curve (iv.csv).
    Iv(Common),
    /// Step-height, curvature and angle sweeps with sensitivity ranking (sweep.json).
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `out_dir` in the config.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Use the zero-bias transmission for every bias window.
    #[arg(long)]
    linear_response: bool,
    /// Worker threads, 0 for one per core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Cmd::Build(c) => (Command::Build, c),
        Cmd::Transmission(c) => (Command::Transmission, c),
        Cmd::Ldos(c) => (Command::Ldos, c),
        Cmd::Iv(c) => (Command::Iv, c),
        Cmd::Sweep(c) => (Command::Sweep, c),
    };
    match execute(command, &common) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = err.downcast_ref::<RunError>().map_or(1, RunError::exit_code);
            ExitCode::from(code)
        }
    }
}

fn execute(command: Command, common: &Common) -> anyhow::Result<()> {
    let cfg = RunConfig::load(&common.config)?;
    let opts = RunOptions {
        out_dir: common.out_dir.clone(),
        linear_response: common.linear_response,
        threads: common.threads,
    };
    let written = run(command, &cfg, &opts, &mut std::io::stderr())
        .with_context(|| format!("running with {}", common.config.display()))?;
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}
