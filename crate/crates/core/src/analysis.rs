//! Observables and closed-form predictors.
//!
//! Measurements ([`autocorrelation`], [`fringe_measure`], [`revival_detect`],
//! [`spin_reduced_state`], [`transfer_fidelity`]) work on simulated states and
//! series. Predictors ([`fringe_predict`], [`revival_predict`],
//! [`predict_bounce_center`]) evaluate the analytic formulas they are checked
//! against.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::lattice::{LatticeSpec, Topology};
use crate::propagator::{fold_trajectory, AnalyticSpreadParams, SpectralPropagator};
use crate::wavepacket::{encode_qubit_with_momentum, SpinState};

/// `|A| = Σ_σ |⟨ψ_σ(0)|ψ_σ(t)⟩|`.
pub fn autocorrelation(initial: &SpinState, evolved: &SpinState) -> Result<f64> {
    initial.check_dim(evolved)?;
    Ok(initial.up.dotc(&evolved.up).norm() + initial.down.dotc(&evolved.down).norm())
}

/// Real samples on a strictly increasing time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::MalformedSeries("times and values differ in length"));
        }
        if times
            .windows(2)
            .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
        {
            return Err(Error::MalformedSeries("times are not strictly increasing"));
        }
        Ok(TimeSeries { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest sample with `lo < t <= hi`.
    pub fn max_in(&self, lo: f64, hi: f64) -> Option<(f64, f64)> {
        self.times
            .iter()
            .zip(&self.values)
            .filter(|(t, _)| **t > lo && **t <= hi)
            .map(|(t, v)| (*t, *v))
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// Uniform grid of `n_samples` times on `[0, t_max]`.
pub fn uniform_grid(t_max: f64, n_samples: usize) -> Vec<f64> {
    match n_samples {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => {
            let dt = t_max / (n_samples - 1) as f64;
            (0..n_samples).map(|i| i as f64 * dt).collect()
        }
    }
}

pub fn autocorrelation_series(prop: &SpectralPropagator, initial: &SpinState, t_grid: &[f64]) -> Result<TimeSeries> {
    autocorrelation_series_with(Execution::default(), prop, initial, t_grid)
}

/// `|A(t)|` on a grid. Each sample costs `O(N)` once the mode overlaps of the
/// initial state are known: `⟨ψ|e^{-iHt}|ψ⟩ = Σ_a |c_a|² e^{-iε_a t}`.
pub fn autocorrelation_series_with(
    exec: Execution,
    prop: &SpectralPropagator,
    initial: &SpinState,
    t_grid: &[f64],
) -> Result<TimeSeries> {
    if t_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let overlaps = prop.overlaps(initial)?;
    let energies = prop.basis().energies();
    let values = exec.map(t_grid, |&t| {
        let [up, down] = overlaps.return_amplitudes(energies, t);
        up.norm() + down.norm()
    });
    TimeSeries::new(t_grid.to_vec(), values)
}

/// Predicted self-interference pattern of a spreading packet on a ring.
#[derive(Debug, Clone, PartialEq)]
pub struct FringeProfile {
    /// Sites `1..=N`.
    pub sites: Vec<usize>,
    /// Normalised predicted density on `sites`.
    pub density: Vec<f64>,
    /// Image amplitude ratio `c(j)` on `sites`.
    pub modulation: Vec<f64>,
    /// Effective fringe wavevector `K = 2NJα²α'²δτ`.
    pub wavevector: f64,
    /// Initial phase `φ₀ = K(N/2 − N_c) + k₀N`.
    pub phase: f64,
    /// Spatial period `Δ = |2π/K|`.
    pub period: f64,
    /// Packet center `N_c` at `δτ` (unwrapped).
    pub center: f64,
    /// Inverse width `α'` at `δτ`.
    pub width: f64,
    /// Largest relative envelope weight of the neglected images `l = −1, 2`.
    pub neglected_image_weight: f64,
    /// False when the two-image approximation is not trustworthy.
    pub in_regime: bool,
}

/// Neglected images above this relative weight flag the prediction.
const IMAGE_WEIGHT_LIMIT: f64 = 0.1;

/// Two-image (`l = 0, 1`) prediction of the fringe pattern at `δτ`.
///
/// The density is `|Φ(j)|² [1 + c² + 2c cos(Kj + φ₀)]`, normalised, where
/// `Φ` is the analytic spreading packet and `c = exp[−α'²N(j − N_c + N/2)]`
/// is the ratio of the `j + N` image envelope to the direct one.
pub fn fringe_predict(
    alpha: f64,
    k0: f64,
    center: f64,
    lattice: &LatticeSpec,
    delta_tau: f64,
) -> Result<FringeProfile> {
    if lattice.topology() != Topology::Ring {
        return Err(Error::RequiresRing);
    }
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::NonPositiveAlpha(alpha));
    }
    let n = lattice.n_sites();
    let nf = n as f64;
    let params = AnalyticSpreadParams {
        alpha0: alpha,
        k0,
        center0: center,
        hopping: lattice.hopping(),
    };
    let ap = params.width_at(delta_tau);
    let nc = params.center_at(delta_tau);
    let ap2 = ap * ap;
    let wavevector = 2.0 * nf * lattice.hopping() * alpha * alpha * ap2 * delta_tau;
    let phase = wavevector * (nf / 2.0 - nc) + k0 * nf;
    let period = (2.0 * PI / wavevector).abs();

    let sites: Vec<usize> = (1..=n).collect();
    let mut modulation = Vec::with_capacity(n);
    let mut density = Vec::with_capacity(n);
    for &j in &sites {
        let x = j as f64;
        let base = (-ap2 * (x - nc).powi(2)).exp();
        let c = (-ap2 * nf * (x - nc + nf / 2.0)).exp();
        modulation.push(c);
        density.push(base * (1.0 + c * c + 2.0 * c * (wavevector * x + phase).cos()));
    }
    let total: f64 = density.iter().sum();
    density.iter_mut().for_each(|d| *d /= total);

    // relative envelope amplitude of image l at site j: exp(-α'²(j + lN - N_c)²/2)
    let envelope = |x: f64, l: f64| (-0.5 * ap2 * (x + l * nf - nc).powi(2)).exp();
    let kept = sites
        .iter()
        .map(|&j| envelope(j as f64, 0.0).max(envelope(j as f64, 1.0)))
        .fold(0.0, f64::max);
    let neglected = sites
        .iter()
        .map(|&j| envelope(j as f64, -1.0).max(envelope(j as f64, 2.0)))
        .fold(0.0, f64::max);
    let neglected_image_weight = neglected / kept;
    let wrapped = sites.iter().any(|&j| envelope(j as f64, 1.0) > IMAGE_WEIGHT_LIMIT);
    let in_regime = wrapped && neglected_image_weight <= IMAGE_WEIGHT_LIMIT;
    if !in_regime {
        log::warn!(
            "fringe prediction outside the two-image regime (wrapped: {wrapped}, neglected image weight {neglected_image_weight:.3})"
        );
    }

    Ok(FringeProfile {
        sites,
        density,
        modulation,
        wavevector,
        phase,
        period,
        center: nc,
        width: ap,
        neglected_image_weight,
        in_regime,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringeMeasureOptions {
    /// Moving-average window for the envelope; `None` means `max(5, N/20)`.
    pub window: Option<usize>,
    /// The spectral peak must exceed this multiple of the median magnitude.
    pub floor_factor: f64,
}

impl Default for FringeMeasureOptions {
    fn default() -> Self {
        FringeMeasureOptions {
            window: None,
            floor_factor: 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringeMeasurement {
    /// Measured period in sites; `None` when no significant fringe exists.
    pub period: Option<f64>,
    /// Dominant nonzero frequency bin before refinement.
    pub bin: usize,
    /// Peak magnitude over the median spectral floor.
    pub peak_to_floor: f64,
}

/// Extracts the dominant spatial period of a density profile.
///
/// Divides out a moving-average envelope, takes the DFT of the mean-removed
/// residual over sites and refines the strongest nonzero bin by fitting a
/// parabola through it and its neighbours.
pub fn fringe_measure(density: &[f64], opts: FringeMeasureOptions) -> Result<FringeMeasurement> {
    let n = density.len();
    if n < 16 {
        return Err(Error::ProfileTooShort(n));
    }
    let window = opts.window.unwrap_or((n / 20).max(5)).max(1);
    let half = window / 2;
    let residual: Vec<f64> = (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + window - half).min(n);
            let env = density[lo..hi].iter().sum::<f64>() / (hi - lo) as f64;
            if env > 0.0 {
                density[i] / env
            } else {
                1.0
            }
        })
        .collect();
    let mean = residual.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<rustfft::num_complex::Complex<f64>> = residual
        .iter()
        .map(|&r| rustfft::num_complex::Complex::new(r - mean, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let mags: Vec<f64> = buf.iter().take(n / 2 + 1).map(|z| z.norm()).collect();

    let (bin, peak) = mags
        .iter()
        .enumerate()
        .skip(1)
        .map(|(b, &m)| (b, m))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least 8 bins");
    let mut floor_sample: Vec<f64> = mags[1..].to_vec();
    floor_sample.sort_by(f64::total_cmp);
    let floor = floor_sample[floor_sample.len() / 2];
    let peak_to_floor = if floor > 0.0 { peak / floor } else { f64::INFINITY };

    if peak <= 1e-9 * n as f64 || peak < opts.floor_factor * floor {
        return Ok(FringeMeasurement {
            period: None,
            bin,
            peak_to_floor,
        });
    }

    let left = mags[bin - 1];
    let right = if bin + 1 < mags.len() {
        mags[bin + 1]
    } else {
        mags[bin - 1]
    };
    let curvature = left - 2.0 * peak + right;
    let shift = if curvature < 0.0 {
        (0.5 * (left - right) / curvature).clamp(-0.5, 0.5)
    } else {
        0.0
    };
    let freq = bin as f64 + shift;
    Ok(FringeMeasurement {
        period: Some(n as f64 / freq),
        bin,
        peak_to_floor,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Linear,
    Quadratic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RevivalMechanism {
    /// Rigid traversal under linear dispersion.
    LinearTraversal,
    /// Recurrence of the quadratic-band spectrum.
    QuadraticRevival,
    /// Quadratic recurrence of an even-parity chain packet, which only
    /// populates half of the levels.
    ParityReducedRevival,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RevivalPrediction {
    pub mechanism: RevivalMechanism,
    /// Predicted recurrence time in units of `1/J`.
    pub time: f64,
    /// True when a `centered` request had no effect for this lattice/regime.
    pub centered_ignored: bool,
}

/// Closed-form recurrence times.
///
/// | lattice | linear     | quadratic      | quadratic, centered |
/// |---------|------------|----------------|---------------------|
/// | ring    | N/(2J)     | N²/(2πJ)       | —                   |
/// | chain   | (N+1)/J    | 2(N+1)²/(πJ)   | (N+1)²/(4πJ)        |
pub fn revival_predict(lattice: &LatticeSpec, regime: Regime, centered: bool) -> RevivalPrediction {
    let n = lattice.n_sites() as f64;
    let j = lattice.hopping();
    let (mechanism, time) = match (lattice.topology(), regime) {
        (Topology::Ring, Regime::Linear) => (RevivalMechanism::LinearTraversal, n / (2.0 * j)),
        (Topology::Chain, Regime::Linear) => (RevivalMechanism::LinearTraversal, (n + 1.0) / j),
        (Topology::Ring, Regime::Quadratic) => (RevivalMechanism::QuadraticRevival, n * n / (2.0 * PI * j)),
        (Topology::Chain, Regime::Quadratic) if centered => (
            RevivalMechanism::ParityReducedRevival,
            (n + 1.0).powi(2) / (4.0 * PI * j),
        ),
        (Topology::Chain, Regime::Quadratic) => {
            (RevivalMechanism::QuadraticRevival, 2.0 * (n + 1.0).powi(2) / (PI * j))
        }
    };
    let centered_ignored = centered && mechanism != RevivalMechanism::ParityReducedRevival;
    if centered_ignored {
        log::info!("centered packets only change the quadratic chain revival; flag ignored");
    }
    RevivalPrediction {
        mechanism,
        time,
        centered_ignored,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub time: f64,
    pub value: f64,
}

/// Default threshold for [`revival_detect`].
pub const DEFAULT_REVIVAL_THRESHOLD: f64 = 0.8;

/// Interior local maxima with value at least `threshold`, each refined by a
/// parabola through the three samples around it.
pub fn revival_detect(series: &TimeSeries, threshold: f64) -> Vec<Peak> {
    let t = series.times();
    let v = series.values();
    let mut peaks = Vec::new();
    for i in 1..v.len().saturating_sub(1) {
        if !(v[i] > v[i - 1] && v[i] >= v[i + 1] && v[i] >= threshold) {
            continue;
        }
        peaks.push(refine_parabola(
            (t[i - 1], v[i - 1]),
            (t[i], v[i]),
            (t[i + 1], v[i + 1]),
        ));
    }
    peaks
}

fn refine_parabola(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> Peak {
    // vertex of the parabola through three (not necessarily uniform) points
    let (x0, y0) = a;
    let (x1, y1) = b;
    let (x2, y2) = c;
    let d0 = (y1 - y0) / (x1 - x0);
    let d1 = (y2 - y1) / (x2 - x1);
    let curv = (d1 - d0) / (x2 - x0);
    if curv >= 0.0 {
        return Peak { time: x1, value: y1 };
    }
    // p(x) = y1 + s (x - x1) + curv (x - x1)^2, with s the slope at x1
    let s = d0 + curv * (x1 - x0);
    let dx = (-s / (2.0 * curv)).clamp(x0 - x1, x2 - x1);
    Peak {
        time: x1 + dx,
        value: y1 + s * dx + curv * dx * dx,
    }
}

/// Reduced spin density matrix `ρ_{σσ'} = Σ_j ψ_σ(j) ψ*_{σ'}(j)`, with index 0
/// for spin up.
pub fn spin_reduced_state(state: &SpinState) -> Matrix2<Complex64> {
    let uu = state.up.dotc(&state.up);
    let dd = state.down.dotc(&state.down);
    // ρ_{↑↓} = Σ ψ↑ ψ*↓ = ⟨ψ↓|ψ↑⟩
    let ud = state.down.dotc(&state.up);
    Matrix2::new(uu, ud, ud.conj(), dd)
}

/// Bloch vector `(⟨σx⟩, ⟨σy⟩, ⟨σz⟩)` of a reduced spin state.
pub fn bloch_vector(rho: &Matrix2<Complex64>) -> [f64; 3] {
    let off = rho[(1, 0)];
    [2.0 * off.re, 2.0 * off.im, (rho[(0, 0)] - rho[(1, 1)]).re]
}

/// A flying-qubit transfer: encode at `source`, evolve for `time`, compare
/// with the same qubit encoded at `target`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitTransfer {
    pub theta: f64,
    pub phi_angle: f64,
    pub alpha: f64,
    /// Canonical carrier momentum of both the sent and the reference packet.
    pub k0: f64,
    pub source: f64,
    pub target: f64,
    pub time: f64,
}

/// `|⟨qubit at target | e^{-iHt} qubit at source⟩|`.
pub fn transfer_fidelity(setup: &QubitTransfer, lattice: &LatticeSpec, prop: &SpectralPropagator) -> Result<f64> {
    let sent = encode_qubit_with_momentum(
        setup.theta,
        setup.phi_angle,
        lattice,
        setup.alpha,
        setup.source,
        setup.k0,
    )?;
    let reference = encode_qubit_with_momentum(
        setup.theta,
        setup.phi_angle,
        lattice,
        setup.alpha,
        setup.target,
        setup.k0,
    )?;
    let evolved = prop.evolve(&sent, setup.time)?;
    Ok(reference.inner(&evolved)?.norm())
}

/// Center of a ballistic chain packet launched at `center` with velocity
/// `velocity`, folded at the open ends. The flag reports an odd number of
/// reflections (an overall sign flip of the packet).
pub fn predict_bounce_center(center: f64, velocity: f64, t: f64, n_sites: usize) -> (f64, bool) {
    fold_trajectory(center + velocity * t, n_sites)
}

/// Site (1-based) of the largest density value.
pub fn density_peak(density: &[f64]) -> usize {
    density
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i + 1)
        .unwrap_or(0)
}

/// Pearson correlation coefficient of two equal-length samples.
pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len()) as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma).powi(2);
        sbb += (y - mb).powi(2);
    }
    sab / (saa * sbb).sqrt()
}
