//! Runs one resolved experiment (or a sweep of them) into result tables.

use std::collections::BTreeMap;

use blochring::analysis::{
    autocorrelation_series_with, fringe_measure, fringe_predict, revival_detect, revival_predict, transfer_fidelity,
    uniform_grid, FringeMeasureOptions, QubitTransfer, Regime, DEFAULT_REVIVAL_THRESHOLD,
};
use blochring::wavepacket::{gaussian_packet, width_check, DEFAULT_WIDTH_STRICTNESS};
use blochring::{Execution, SpectralPropagator, Topology};

use crate::config::{ConfigLayer, ExperimentConfig, ExperimentKind};
use crate::error::{CliError, Result};
use crate::table::ResultTable;

/// The numeric part of a run plus anything worth flagging in the header.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub table: ResultTable,
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
}

fn runtime(e: blochring::Error) -> CliError {
    CliError::runtime(e.to_string())
}

/// Runs a single grid point. `exec` controls the time-grid parallelism.
pub fn run_single(cfg: &ExperimentConfig, exec: Execution) -> Result<RunOutput> {
    let lattice = cfg.lattice()?;
    let prop = SpectralPropagator::new(&lattice);
    let psi = gaussian_packet(&lattice, &cfg.packet()).map_err(runtime)?;
    let grid = uniform_grid(cfg.t_max, cfg.n_samples);
    let mut warnings = Vec::new();
    let mut notes = Vec::new();

    let width = width_check(cfg.alpha, cfg.n_sites, DEFAULT_WIDTH_STRICTNESS);
    if !width.ok {
        warnings.push(format!(
            "packet half-width {:.3} is not much smaller than the lattice (margin {:.2} < {})",
            width.half_width, width.margin, DEFAULT_WIDTH_STRICTNESS
        ));
    }

    let table = match cfg.experiment {
        ExperimentKind::Evolve => {
            let mut table = ResultTable::new(["t", "site", "density"]);
            let states = prop.evolve_many(&psi, &grid, exec).map_err(runtime)?;
            for (t, state) in grid.iter().zip(states) {
                for (j, d) in state.density().into_iter().enumerate() {
                    table.push(vec![*t, (j + 1) as f64, d]);
                }
            }
            table
        }
        ExperimentKind::Autocorr => {
            let series = autocorrelation_series_with(exec, &prop, &psi, &grid).map_err(runtime)?;
            let mut table = ResultTable::new(["t", "A_abs"]);
            for (t, a) in series.times().iter().zip(series.values()) {
                table.push(vec![*t, *a]);
            }
            table
        }
        ExperimentKind::Fringe => {
            let delta_tau = cfg.t_max;
            let simulated = prop.evolve(&psi, delta_tau).map_err(runtime)?.density();
            let predicted = fringe_predict(cfg.alpha, cfg.k0, cfg.center, &lattice, delta_tau).map_err(runtime)?;
            let measured = fringe_measure(&simulated, FringeMeasureOptions::default()).map_err(runtime)?;
            if !predicted.in_regime {
                warnings.push(format!(
                    "two-image approximation outside its regime: neglected image weight {:.3}",
                    predicted.neglected_image_weight
                ));
            }
            let measured_period = measured.period.unwrap_or_else(|| {
                warnings.push("no significant fringe in the simulated density".into());
                f64::NAN
            });
            notes.push(format!("fringe evaluated at delta_tau = t_max = {delta_tau}"));
            let mut table =
                ResultTable::new(["site", "simulated", "predicted", "K", "phi0", "Delta", "Delta_measured"]);
            for (j, (s, p)) in simulated.iter().zip(&predicted.density).enumerate() {
                table.push(vec![
                    (j + 1) as f64,
                    *s,
                    *p,
                    predicted.wavevector,
                    predicted.phase,
                    predicted.period,
                    measured_period,
                ]);
            }
            table
        }
        ExperimentKind::Revival => {
            let series = autocorrelation_series_with(exec, &prop, &psi, &grid).map_err(runtime)?;
            let centered = lattice.topology() == Topology::Chain
                && cfg.k0 == 0.0
                && (cfg.center - (cfg.n_sites as f64 + 1.0) / 2.0).abs() < 1e-9;
            let linear = revival_predict(&lattice, Regime::Linear, false);
            let quadratic = revival_predict(&lattice, Regime::Quadratic, centered);
            notes.push(format!(
                "linear prediction: {:?} at t = {}",
                linear.mechanism, linear.time
            ));
            notes.push(format!(
                "quadratic prediction: {:?} at t = {}",
                quadratic.mechanism, quadratic.time
            ));
            let peaks = revival_detect(&series, DEFAULT_REVIVAL_THRESHOLD);
            if peaks.is_empty() {
                warnings.push(format!(
                    "no recurrence above {DEFAULT_REVIVAL_THRESHOLD} up to t = {}",
                    cfg.t_max
                ));
            }
            let mut table = ResultTable::new(["peak", "t", "A_abs", "tau_linear", "tau_quadratic"]);
            for (i, p) in peaks.iter().enumerate() {
                table.push(vec![(i + 1) as f64, p.time, p.value, linear.time, quadratic.time]);
            }
            table
        }
        ExperimentKind::QubitTransfer => {
            let target = cfg
                .target
                .ok_or_else(|| CliError::config("qubit-transfer needs `target`"))?;
            let fidelities = exec.map(&grid, |&t| {
                let setup = QubitTransfer {
                    theta: cfg.theta,
                    phi_angle: cfg.phi_angle,
                    alpha: cfg.alpha,
                    k0: cfg.k0,
                    source: cfg.center,
                    target,
                    time: t,
                };
                transfer_fidelity(&setup, &lattice, &prop)
            });
            let mut table = ResultTable::new(["theta", "phi_angle", "t", "fidelity"]);
            for (t, f) in grid.iter().zip(fidelities) {
                table.push(vec![cfg.theta, cfg.phi_angle, *t, f.map_err(runtime)?]);
            }
            table
        }
    };
    Ok(RunOutput { table, notes, warnings })
}

/// Cross product of the sweep grid, in lexicographic key order.
pub fn sweep_points(sweep: &BTreeMap<String, Vec<f64>>) -> Vec<Vec<(String, f64)>> {
    let mut points = vec![Vec::new()];
    for (key, values) in sweep {
        points = points
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |&v| {
                    let mut next = p.clone();
                    next.push((key.clone(), v));
                    next
                })
            })
            .collect();
    }
    points
}

/// Runs the base experiment at every sweep point (concurrently when the
/// `parallel` feature is on) and stacks the tables with the sweep values
/// prepended. An empty sweep is a plain single run.
pub fn run_sweep(layer: &ConfigLayer, base: &ExperimentConfig) -> Result<RunOutput> {
    if base.sweep.is_empty() {
        return run_single(base, Execution::default());
    }
    let points = sweep_points(&base.sweep);
    let configs = points
        .iter()
        .map(|point| {
            let mut l = layer.clone();
            l.sweep = None;
            for (key, v) in point {
                l.set(key, *v)?;
            }
            l.resolve(Some(base.experiment))
        })
        .collect::<Result<Vec<_>>>()?;

    // one job per grid point; each job runs its own time grid serially
    let results: Vec<Result<RunOutput>> = Execution::default().map(&configs, |c| run_single(c, Execution::Sequential));

    let keys: Vec<String> = base.sweep.keys().cloned().collect();
    let mut columns = keys.clone();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut notes = Vec::new();
    let mut warnings = Vec::new();
    for (point, result) in points.iter().zip(results) {
        let out = result?;
        if columns.len() == keys.len() {
            columns.extend(out.table.columns().iter().cloned());
        }
        let label = point
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        notes.extend(out.notes.into_iter().map(|n| format!("[{label}] {n}")));
        warnings.extend(out.warnings.into_iter().map(|w| format!("[{label}] {w}")));
        for row in out.table.rows() {
            let mut full: Vec<f64> = point.iter().map(|(_, v)| *v).collect();
            full.extend_from_slice(row);
            rows.push(full);
        }
    }
    // stable: rows of one grid point keep their order
    let width = keys.len();
    rows.sort_by(|a, b| {
        a[..width]
            .iter()
            .zip(&b[..width])
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut table = ResultTable::new(columns);
    for row in rows {
        table.push(row);
    }
    Ok(RunOutput { table, notes, warnings })
}
