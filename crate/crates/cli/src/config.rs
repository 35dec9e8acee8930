//! Experiment configuration: a flat TOML file, command-line overrides and
//! the fully resolved [`ExperimentConfig`].

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use blochring::wavepacket::{gaussian_packet, SpinWeights};
use blochring::{LatticeSpec, PacketSpec, Topology};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "BLOCHRING_OUT_DIR";

const DEFAULT_OUT_DIR: &str = "results";
const DEFAULT_ALPHA: f64 = 0.1;
const DEFAULT_T_MAX: f64 = 100.0;
const DEFAULT_SAMPLES: usize = 1001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TopologyKind {
    Ring,
    Chain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Evolve,
    Autocorr,
    Fringe,
    Revival,
    QubitTransfer,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Evolve => "evolve",
            ExperimentKind::Autocorr => "autocorr",
            ExperimentKind::Fringe => "fringe",
            ExperimentKind::Revival => "revival",
            ExperimentKind::QubitTransfer => "qubit-transfer",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Plotdata,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Plotdata => "dat",
        }
    }
}

/// Every key accepted in a config file. All fields are optional so that
/// files and flags can be layered; [`ConfigLayer::resolve`] applies defaults.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub experiment: Option<ExperimentKind>,
    pub n_sites: Option<usize>,
    pub topology: Option<TopologyKind>,
    pub hopping: Option<f64>,
    pub flux: Option<f64>,
    pub flux_phase: Option<f64>,
    pub alpha: Option<f64>,
    pub k0: Option<f64>,
    pub center: Option<f64>,
    pub theta: Option<f64>,
    pub phi_angle: Option<f64>,
    pub target: Option<f64>,
    pub t_max: Option<f64>,
    pub n_samples: Option<usize>,
    pub out: Option<PathBuf>,
    pub formats: Option<Vec<Format>>,
    pub sweep: Option<BTreeMap<String, Vec<f64>>>,
}

/// Config keys that may appear in a `[sweep]` table.
pub const SWEEPABLE: &[&str] = &[
    "n_sites",
    "hopping",
    "flux",
    "flux_phase",
    "alpha",
    "k0",
    "center",
    "theta",
    "phi_angle",
    "target",
    "t_max",
    "n_samples",
];

macro_rules! overlay {
    ($base:ident, $top:ident; $($field:ident),*) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field.clone(); } )*
    };
}

impl ConfigLayer {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::config(e.message().to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Values set in `top` win over values in `self`.
    pub fn overlay(mut self, top: &ConfigLayer) -> Self {
        overlay!(self, top; experiment, n_sites, topology, hopping, flux, flux_phase, alpha, k0, center,
            theta, phi_angle, target, t_max, n_samples, out, formats, sweep);
        // a flux given in one convention replaces the other one
        if top.flux.is_some() && top.flux_phase.is_none() {
            self.flux_phase = None;
        }
        if top.flux_phase.is_some() && top.flux.is_none() {
            self.flux = None;
        }
        self
    }

    /// Sets one sweepable key from a grid value.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let slot = match key {
            "n_sites" | "n_samples" => {
                if value.fract() != 0.0 || value < 0.0 {
                    return Err(CliError::config(format!(
                        "sweep value {value} for `{key}` is not a count"
                    )));
                }
                let count = Some(value as usize);
                if key == "n_sites" {
                    self.n_sites = count;
                } else {
                    self.n_samples = count;
                }
                return Ok(());
            }
            "hopping" => &mut self.hopping,
            "flux" => {
                self.flux_phase = None;
                &mut self.flux
            }
            "flux_phase" => {
                self.flux = None;
                &mut self.flux_phase
            }
            "alpha" => &mut self.alpha,
            "k0" => &mut self.k0,
            "center" => &mut self.center,
            "theta" => &mut self.theta,
            "phi_angle" => &mut self.phi_angle,
            "target" => &mut self.target,
            "t_max" => &mut self.t_max,
            other => return Err(CliError::config(format!("`{other}` cannot be swept"))),
        };
        *slot = Some(value);
        Ok(())
    }

    /// Applies defaults and validates everything the run will need.
    pub fn resolve(&self, experiment: Option<ExperimentKind>) -> Result<ExperimentConfig> {
        let experiment = experiment
            .or(self.experiment)
            .ok_or_else(|| CliError::config("no experiment selected"))?;
        let n_sites = self
            .n_sites
            .ok_or_else(|| CliError::config("missing required key `n_sites`"))?;
        let topology = self.topology.unwrap_or(TopologyKind::Ring);
        let flux = match (self.flux, self.flux_phase) {
            (Some(_), Some(_)) => return Err(CliError::config("`flux` and `flux_phase` are mutually exclusive")),
            (Some(f), None) => f,
            (None, Some(p)) => p * n_sites as f64 / (2.0 * PI),
            (None, None) => 0.0,
        };
        let default_center = match topology {
            TopologyKind::Ring => n_sites as f64 / 2.0,
            TopologyKind::Chain => (n_sites as f64 + 1.0) / 2.0,
        };
        let sweep = self.sweep.clone().unwrap_or_default();
        for (key, values) in &sweep {
            if !SWEEPABLE.contains(&key.as_str()) {
                return Err(CliError::config(format!(
                    "sweep key `{key}` is not a sweepable config field"
                )));
            }
            if values.is_empty() {
                return Err(CliError::config(format!("sweep key `{key}` has no values")));
            }
        }
        let out = self
            .out
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
        let cfg = ExperimentConfig {
            experiment,
            n_sites,
            topology,
            hopping: self.hopping.unwrap_or(1.0),
            flux,
            alpha: self.alpha.unwrap_or(DEFAULT_ALPHA),
            k0: self.k0.unwrap_or(0.0),
            center: self.center.unwrap_or(default_center),
            theta: self.theta.unwrap_or(0.0),
            phi_angle: self.phi_angle.unwrap_or(0.0),
            target: self.target,
            t_max: self.t_max.unwrap_or(DEFAULT_T_MAX),
            n_samples: self.n_samples.unwrap_or(DEFAULT_SAMPLES),
            formats: self.formats.clone().unwrap_or_else(|| vec![Format::Csv]),
            sweep,
            out,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// A fully resolved, validated experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub n_sites: usize,
    pub topology: TopologyKind,
    pub hopping: f64,
    pub flux: f64,
    pub alpha: f64,
    pub k0: f64,
    pub center: f64,
    pub theta: f64,
    pub phi_angle: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    pub t_max: f64,
    pub n_samples: usize,
    pub formats: Vec<Format>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub sweep: BTreeMap<String, Vec<f64>>,
    /// Where files go; deliberately left out of the provenance header.
    #[serde(skip)]
    pub out: PathBuf,
}

impl ExperimentConfig {
    fn validate(&self) -> Result<()> {
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(CliError::config(format!(
                "`t_max` must be positive, got {}",
                self.t_max
            )));
        }
        if self.n_samples < 2 {
            return Err(CliError::config(format!(
                "`n_samples` must be at least 2, got {}",
                self.n_samples
            )));
        }
        if self.formats.is_empty() {
            return Err(CliError::config("`formats` is empty"));
        }
        let lattice = self.lattice()?;
        gaussian_packet(&lattice, &self.packet()).map_err(|e| CliError::config(e.to_string()))?;
        match self.experiment {
            ExperimentKind::Fringe if self.topology != TopologyKind::Ring => {
                Err(CliError::config("the fringe experiment needs a ring"))
            }
            ExperimentKind::QubitTransfer => {
                let target = self
                    .target
                    .ok_or_else(|| CliError::config("qubit-transfer needs `target`"))?;
                if !(1.0..=self.n_sites as f64).contains(&target) {
                    return Err(CliError::config(format!(
                        "`target` {target} is outside 1..={}",
                        self.n_sites
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn lattice(&self) -> Result<LatticeSpec> {
        let topology = match self.topology {
            TopologyKind::Ring => Topology::Ring,
            TopologyKind::Chain => Topology::Chain,
        };
        LatticeSpec::new(topology, self.n_sites, self.hopping, self.flux).map_err(|e| CliError::config(e.to_string()))
    }

    pub fn packet(&self) -> PacketSpec {
        PacketSpec::new(self.alpha, self.k0, self.center).with_spin(SpinWeights::bloch(self.theta, self.phi_angle))
    }

    /// The resolved config as `key = value` lines (TOML syntax).
    pub fn describe(&self) -> Vec<String> {
        toml::to_string(self)
            .expect("resolved config is always serialisable")
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(str::to_owned)
            .collect()
    }
}
