//! Batch front end for the `gnrstep-core` transport library: configuration,
//! command dispatch and file output.

pub mod config;
pub mod output;

use std::io::Write;
use std::path::{Path, PathBuf};

use gnrstep_core::exec::Executor;
use gnrstep_core::geometry::GeometryError;
use gnrstep_core::landauer::{self, sensitivity_rank, sweep_against, LandauerError};
use gnrstep_core::model::{assemble, BiasRamp, ModelError};
use gnrstep_core::negf::{self, NegfError};
use rayon::prelude::*;
use thiserror::Error;

pub use config::RunConfig;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl RunError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) => 2,
            RunError::Io { .. } => 3,
            RunError::Numerical(_) => 4,
        }
    }
}

impl From<GeometryError> for RunError {
    fn from(e: GeometryError) -> Self {
        RunError::Config(e.to_string())
    }
}

impl From<ModelError> for RunError {
    fn from(e: ModelError) -> Self {
        RunError::Config(e.to_string())
    }
}

impl From<NegfError> for RunError {
    fn from(e: NegfError) -> Self {
        match e {
            NegfError::InvalidGrid(_) | NegfError::DimensionMismatch { .. } => {
                RunError::Config(e.to_string())
            }
            _ => RunError::Numerical(e.to_string()),
        }
    }
}

impl From<LandauerError> for RunError {
    fn from(e: LandauerError) -> Self {
        match e {
            LandauerError::Negf(inner) => inner.into(),
            LandauerError::Model(inner) => inner.into(),
            LandauerError::Geometry(inner) => inner.into(),
            LandauerError::NonConvergent { .. } => RunError::Numerical(e.to_string()),
            _ => RunError::Config(e.to_string()),
        }
    }
}

/// Evaluates batches on a rayon pool; results keep input order.
pub struct Parallel {
    pool: rayon::ThreadPool,
}

impl Parallel {
    /// `threads == 0` picks the rayon default.
    pub fn new(threads: usize) -> Result<Self, RunError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| RunError::Config(format!("cannot start {threads} threads: {e}")))?;
        Ok(Parallel { pool })
    }
}

impl Executor for Parallel {
    fn map<T, F>(&self, inputs: &[f64], f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(f64) -> T + Sync + Send,
    {
        self.pool.install(|| inputs.par_iter().map(|&x| f(x)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Build,
    Transmission,
    Ldos,
    Iv,
    Sweep,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    /// Overrides `out_dir` from the config; the working directory otherwise.
    pub out_dir: Option<PathBuf>,
    pub linear_response: bool,
    pub threads: usize,
}

/// Run `command` and return the files written. Diagnostics such as clamp
/// warnings go to `diag`.
pub fn run(
    command: Command,
    cfg: &RunConfig,
    opts: &RunOptions,
    diag: &mut dyn Write,
) -> Result<Vec<PathBuf>, RunError> {
    let out_dir = opts
        .out_dir
        .clone()
        .or_else(|| cfg.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let exec = Parallel::new(opts.threads)?;
    match command {
        Command::Build => build(cfg, &out_dir, diag),
        Command::Transmission => transmission(cfg, &out_dir, &exec, diag),
        Command::Ldos => ldos(cfg, &out_dir, &exec, diag),
        Command::Iv => iv(cfg, &out_dir, opts.linear_response, &exec, diag),
        Command::Sweep => sweep(cfg, &out_dir, opts.linear_response, &exec),
    }
}

fn geometry_with_warning(
    cfg: &RunConfig,
    diag: &mut dyn Write,
) -> Result<gnrstep_core::geometry::DeviceGeometry, RunError> {
    let (geom, warning) = cfg.geometry()?;
    if let Some(w) = warning {
        let _ = writeln!(diag, "warning: {w}");
    }
    Ok(geom)
}

fn build(cfg: &RunConfig, out: &Path, diag: &mut dyn Write) -> Result<Vec<PathBuf>, RunError> {
    let geom = geometry_with_warning(cfg, diag)?;
    Ok(vec![
        output::write(out, "geometry.xyz", &output::xyz(&geom))?,
        output::write(out, "geometry.json", &output::geometry_json(&geom))?,
    ])
}

fn transmission(
    cfg: &RunConfig,
    out: &Path,
    exec: &Parallel,
    diag: &mut dyn Write,
) -> Result<Vec<PathBuf>, RunError> {
    let geom = geometry_with_warning(cfg, diag)?;
    let model = cfg.model()?;
    let grid = cfg.grid()?;
    let decimation = cfg.decimation()?;
    let mut written = Vec::new();
    for v in cfg.biases()? {
        let h = assemble(&geom, &model, &BiasRamp::new(v, &geom.spec))?;
        let spectrum = negf::transmission_spectrum(&h, &grid, &decimation, geom.fingerprint(), exec)?;
        let name = output::transmission_file_name(v);
        written.push(output::write(out, &name, &output::transmission_csv(&spectrum))?);
    }
    Ok(written)
}

fn ldos(
    cfg: &RunConfig,
    out: &Path,
    exec: &Parallel,
    diag: &mut dyn Write,
) -> Result<Vec<PathBuf>, RunError> {
    let geom = geometry_with_warning(cfg, diag)?;
    let h = assemble(&geom, &cfg.model()?, &BiasRamp::zero(&geom.spec))?;
    let tags = negf::sampling_atoms(&geom);
    let atoms = match &cfg.ldos_atoms {
        Some(list) => {
            if let Some(&bad) = list.iter().find(|&&i| i >= geom.sites.len()) {
                return Err(RunError::Config(format!(
                    "invalid value for `ldos_atoms`: atom {bad} does not exist ({} atoms)",
                    geom.sites.len()
                )));
            }
            list.clone()
        }
        None => std::iter::once(tags.far).chain(tags.arc).collect(),
    };
    let table = negf::ldos(&h, &cfg.ldos_grid()?, &cfg.decimation()?, Some(&atoms), exec)?;
    Ok(vec![
        output::write(out, "ldos.csv", &output::ldos_csv(&table))?,
        output::write(out, "ldos_sampling.json", &output::sampling_json(&tags, &table))?,
    ])
}

fn iv(
    cfg: &RunConfig,
    out: &Path,
    linear_response: bool,
    exec: &Parallel,
    diag: &mut dyn Write,
) -> Result<Vec<PathBuf>, RunError> {
    let geom = geometry_with_warning(cfg, diag)?;
    let opts = cfg.current_options(linear_response)?;
    let curve = landauer::iv_curve(&geom, &cfg.model()?, &cfg.biases()?, &opts, exec)?;
    Ok(vec![output::write(out, "iv.csv", &output::iv_csv(&curve))?])
}

fn sweep(
    cfg: &RunConfig,
    out: &Path,
    linear_response: bool,
    exec: &Parallel,
) -> Result<Vec<PathBuf>, RunError> {
    let spec = cfg.ribbon()?;
    let model = cfg.model()?;
    let biases = cfg.biases()?;
    let opts = cfg.current_options(linear_response)?;
    let requests = cfg.sweeps()?;
    let flat_geom = gnrstep_core::geometry::build_flat_ribbon(&spec)?;
    let flat = landauer::iv_curve(&flat_geom, &model, &biases, &opts, exec)?;
    let mut reports = Vec::with_capacity(requests.len());
    for req in requests {
        reports.push(sweep_against(
            flat.clone(),
            req.parameter,
            &req.values,
            req.fixed,
            &spec,
            &model,
            &opts,
            exec,
        )?);
    }
    let ranking = if reports.len() == 3 { Some(sensitivity_rank(&reports)?) } else { None };
    Ok(vec![output::write(out, "sweep.json", &output::sweep_json(&reports, ranking.as_ref()))?])
}
