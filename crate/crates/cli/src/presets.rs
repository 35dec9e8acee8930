//! Canned recipes that regenerate the published figures.
//!
//! All times are in units of `1/J`; `t_max` spans the plotted window.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::config::{ConfigLayer, ExperimentKind, TopologyKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    #[value(name = "2")]
    Fig2,
    #[value(name = "3a")]
    Fig3a,
    #[value(name = "3b")]
    Fig3b,
    #[value(name = "3c")]
    Fig3c,
    #[value(name = "3d")]
    Fig3d,
    #[value(name = "4a")]
    Fig4a,
    #[value(name = "4b")]
    Fig4b,
    #[value(name = "4c")]
    Fig4c,
    #[value(name = "4d")]
    Fig4d,
    #[value(name = "5b")]
    Fig5b,
}

/// One output file of a preset.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetRun {
    pub stem: String,
    pub layer: ConfigLayer,
}

const N: usize = 100;
const RESONANT_FLUXES: [f64; 3] = [20.0, 25.0, 33.0];

fn base(experiment: ExperimentKind, topology: TopologyKind, alpha: f64, t_max: f64, n_samples: usize) -> ConfigLayer {
    ConfigLayer {
        experiment: Some(experiment),
        n_sites: Some(N),
        topology: Some(topology),
        alpha: Some(alpha),
        t_max: Some(t_max),
        n_samples: Some(n_samples),
        ..Default::default()
    }
}

fn sweep(key: &str, values: impl IntoIterator<Item = f64>) -> Option<BTreeMap<String, Vec<f64>>> {
    Some(BTreeMap::from([(key.to_string(), values.into_iter().collect())]))
}

impl Figure {
    pub fn stem(self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig3a => "fig3a",
            Figure::Fig3b => "fig3b",
            Figure::Fig3c => "fig3c",
            Figure::Fig3d => "fig3d",
            Figure::Fig4a => "fig4a",
            Figure::Fig4b => "fig4b",
            Figure::Fig4c => "fig4c",
            Figure::Fig4d => "fig4d",
            Figure::Fig5b => "fig5b",
        }
    }

    pub fn runs(self) -> Vec<PresetRun> {
        use ExperimentKind::*;
        use TopologyKind::*;
        let single = |layer: ConfigLayer| {
            vec![PresetRun {
                stem: self.stem().to_string(),
                layer,
            }]
        };
        match self {
            // stationary-shape transfer at quarter flux (phase π/2)
            Figure::Fig2 => single(ConfigLayer {
                flux_phase: Some(PI / 2.0),
                ..base(Evolve, Ring, 0.1, 200.0, 201)
            }),
            Figure::Fig3a | Figure::Fig3b => {
                let alpha = if self == Figure::Fig3a { 0.1 } else { 0.3 };
                single(ConfigLayer {
                    sweep: sweep("flux", RESONANT_FLUXES),
                    ..base(Autocorr, Ring, alpha, 250.0, 2501)
                })
            }
            // no flux on a chain: the same speeds come from k0 = 2πφ/N
            Figure::Fig3c | Figure::Fig3d => {
                let alpha = if self == Figure::Fig3c { 0.1 } else { 0.3 };
                let momenta = RESONANT_FLUXES.map(|f| 2.0 * PI * f / N as f64);
                single(ConfigLayer {
                    sweep: sweep("k0", momenta),
                    ..base(Autocorr, Chain, alpha, 250.0, 2501)
                })
            }
            Figure::Fig4a => single(ConfigLayer {
                k0: Some(0.05 * PI),
                ..base(Evolve, Ring, 0.3, 300.0, 301)
            }),
            Figure::Fig4b => single(ConfigLayer {
                k0: Some(0.05 * PI),
                ..base(Fringe, Ring, 0.3, 90.0, 2)
            }),
            Figure::Fig4c => single(base(Evolve, Ring, 0.1, 2000.0, 401)),
            Figure::Fig4d => [Ring, Chain]
                .into_iter()
                .map(|topology| PresetRun {
                    stem: format!("{}_{}", self.stem(), if topology == Ring { "ring" } else { "chain" }),
                    layer: ConfigLayer {
                        center: Some(50.5),
                        ..base(Autocorr, topology, 0.1, 2000.0, 8001)
                    },
                })
                .collect(),
            Figure::Fig5b => single(ConfigLayer {
                k0: Some(PI / 2.0),
                ..base(Evolve, Chain, 0.1, 400.0, 401)
            }),
        }
    }
}
