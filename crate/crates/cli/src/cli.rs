//! Argument parsing and top-level dispatch.

use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use clap::{Args, Parser, Subcommand};

use crate::config::{ConfigLayer, ExperimentConfig, ExperimentKind, Format, TopologyKind};
use crate::error::{CliError, Result};
use crate::experiment::{run_sweep, RunOutput};
use crate::presets::Figure;
use crate::table::Provenance;

#[derive(Debug, Parser)]
#[command(
    name = "blochring",
    version,
    about = "Wave-packet dynamics on tight-binding rings and chains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Site densities over time (long-form t, site, density).
    Evolve(Common),
    /// Autocorrelation |A(t)| on a uniform time grid.
    Autocorr(Common),
    /// Simulated vs predicted interference fringe at t = t_max.
    Fringe(Common),
    /// Detected recurrences of |A(t)| vs the predicted revival times.
    Revival(Common),
    /// Spin-qubit transfer fidelity from `center` to `target`.
    QubitTransfer(Common),
    /// Runs an experiment over every point of the `[sweep]` grid.
    Sweep {
        /// Experiment to sweep; defaults to the config's `experiment` key.
        #[arg(long, value_enum)]
        base: Option<ExperimentKind>,
        #[command(flatten)]
        common: Common,
    },
    /// Regenerates the data behind one of the published figures.
    Reproduce {
        #[arg(long, value_enum)]
        figure: Figure,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Output directory [default: $BLOCHRING_OUT_DIR or ./results].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format; repeat for several.
    #[arg(long = "format", value_enum)]
    pub formats: Vec<Format>,
    /// Worker threads for sweeps and time grids.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Fixed provenance timestamp, for byte-reproducible output.
    #[arg(long)]
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// TOML config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of lattice sites N.
    #[arg(long)]
    pub n_sites: Option<usize>,
    /// Periodic ring or open chain.
    #[arg(long, value_enum)]
    pub topology: Option<TopologyKind>,
    /// Hopping amplitude J.
    #[arg(long)]
    pub hopping: Option<f64>,
    /// Flux in flux quanta φ.
    #[arg(long, conflicts_with = "flux_phase", allow_hyphen_values = true)]
    pub flux: Option<f64>,
    /// Flux as the hopping phase 2πφ/N.
    #[arg(long, allow_hyphen_values = true)]
    pub flux_phase: Option<f64>,
    /// Inverse packet width α.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Central quasi-momentum k0.
    #[arg(long, allow_hyphen_values = true)]
    pub k0: Option<f64>,
    /// Initial packet centre (site units, 1-based).
    #[arg(long)]
    pub center: Option<f64>,
    /// End of the time grid, in units of 1/J.
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of time samples, t_max included.
    #[arg(long = "samples")]
    pub n_samples: Option<usize>,
    /// Bloch polar angle of the spin.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Bloch azimuthal angle of the spin.
    #[arg(long, allow_hyphen_values = true)]
    pub phi_angle: Option<f64>,
    /// Receiving site for qubit-transfer.
    #[arg(long)]
    pub target: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl Common {
    fn layer(&self) -> Result<ConfigLayer> {
        let file = match &self.config {
            Some(path) => ConfigLayer::from_file(path)?,
            None => ConfigLayer::default(),
        };
        let flags = ConfigLayer {
            n_sites: self.n_sites,
            topology: self.topology,
            hopping: self.hopping,
            flux: self.flux,
            flux_phase: self.flux_phase,
            alpha: self.alpha,
            k0: self.k0,
            center: self.center,
            theta: self.theta,
            phi_angle: self.phi_angle,
            target: self.target,
            t_max: self.t_max,
            n_samples: self.n_samples,
            out: self.output.out.clone(),
            formats: (!self.output.formats.is_empty()).then(|| self.output.formats.clone()),
            ..Default::default()
        };
        Ok(file.overlay(&flags))
    }
}

/// A file written by [`execute`].
#[derive(Debug, Clone, PartialEq)]
pub struct Written {
    pub path: PathBuf,
    pub warnings: Vec<String>,
}

/// One output stem with its resolved configuration.
type Job = (String, ConfigLayer, ExperimentConfig, OutputArgs);

pub fn execute(command: Command) -> Result<Vec<Written>> {
    let (jobs, work): (Option<usize>, Vec<Job>) = match command {
        Command::Reproduce { figure, output } => {
            let mut work = Vec::new();
            for run in figure.runs() {
                let flags = ConfigLayer {
                    out: output.out.clone(),
                    formats: (!output.formats.is_empty()).then(|| output.formats.clone()),
                    ..Default::default()
                };
                let layer = run.layer.overlay(&flags);
                let cfg = layer.resolve(None)?;
                work.push((run.stem, layer, cfg, output.clone()));
            }
            (output.jobs, work)
        }
        Command::Sweep { base, common } => {
            let layer = common.layer()?;
            let cfg = layer.resolve(base)?;
            let stem = format!("sweep_{}", cfg.experiment);
            (common.output.jobs, vec![(stem, layer, cfg, common.output)])
        }
        single => {
            let (kind, common) = match single {
                Command::Evolve(c) => (ExperimentKind::Evolve, c),
                Command::Autocorr(c) => (ExperimentKind::Autocorr, c),
                Command::Fringe(c) => (ExperimentKind::Fringe, c),
                Command::Revival(c) => (ExperimentKind::Revival, c),
                Command::QubitTransfer(c) => (ExperimentKind::QubitTransfer, c),
                Command::Sweep { .. } | Command::Reproduce { .. } => unreachable!(),
            };
            let mut layer = common.layer()?;
            // a plain subcommand never sweeps
            layer.sweep = None;
            let cfg = layer.resolve(Some(kind))?;
            (
                common.output.jobs,
                vec![(kind.name().to_string(), layer, cfg, common.output)],
            )
        }
    };
    with_jobs(jobs, || {
        let mut written = Vec::new();
        for (stem, layer, cfg, output) in &work {
            let out = run_sweep(layer, cfg)?;
            written.extend(write_outputs(stem, cfg, out, output.timestamp.as_deref())?);
        }
        Ok(written)
    })?
}

fn write_outputs(stem: &str, cfg: &ExperimentConfig, out: RunOutput, timestamp: Option<&str>) -> Result<Vec<Written>> {
    let RunOutput {
        mut table,
        notes,
        warnings,
    } = out;
    table.provenance = Provenance {
        version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: timestamp
            .map(str::to_owned)
            .unwrap_or_else(|| Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true)),
        title: stem.to_string(),
        config: cfg.describe(),
        notes,
        warnings: warnings.clone(),
    };
    let mut written = Vec::new();
    for format in &cfg.formats {
        let path = output_path(&cfg.out, stem, *format);
        table.emit(*format, &path)?;
        written.push(Written {
            path,
            warnings: warnings.clone(),
        });
    }
    Ok(written)
}

pub fn output_path(dir: &Path, stem: &str, format: Format) -> PathBuf {
    dir.join(format!("{stem}.{}", format.extension()))
}

#[cfg(feature = "parallel")]
fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(CliError::config("--jobs must be at least 1")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::runtime(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match jobs {
        Some(0) => Err(CliError::config("--jobs must be at least 1")),
        _ => Ok(f()),
    }
}
