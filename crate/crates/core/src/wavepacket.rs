//! Gaussian wave packets, spin-encoded qubits and momentum boosts.
//!
//! A packet on sites `j = 1..=N` has amplitude
//!
//! ```text
//! ψ_σ(j) = c_σ e^{-(α²/2)(j - N_A)²} e^{i k₀ j} / √Ω₁,   Ω₁ = Σ_j e^{-α²(j - N_A)²}
//! ```
//!
//! The envelope is evaluated on the physical sites only, with no periodic
//! images; this is accurate while the packet is narrow compared with the
//! lattice (see [`width_check`]).
//!
//! `k0` is a momentum. The packet's group velocity is the slope of the band
//! at `k0` (plus the flux phase on a ring), not `k0` itself.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;

/// Default strictness for the locality condition `2√(ln 2)/α ≪ N`.
pub const DEFAULT_WIDTH_STRICTNESS: f64 = 10.0;

/// Spin amplitudes `(c↑, c↓)` with `|c↑|² + |c↓|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinWeights {
    up: Complex64,
    down: Complex64,
}

impl SpinWeights {
    pub fn new(up: Complex64, down: Complex64) -> Result<Self> {
        let norm = up.norm_sqr() + down.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::SpinNotNormalized(norm));
        }
        Ok(SpinWeights { up, down })
    }

    pub fn up() -> Self {
        SpinWeights {
            up: Complex64::new(1.0, 0.0),
            down: Complex64::new(0.0, 0.0),
        }
    }

    pub fn down() -> Self {
        SpinWeights {
            up: Complex64::new(0.0, 0.0),
            down: Complex64::new(1.0, 0.0),
        }
    }

    /// Bloch-sphere state `cos(θ/2)|↑⟩ + sin(θ/2) e^{iφ}|↓⟩`.
    pub fn bloch(theta: f64, phi: f64) -> Self {
        SpinWeights {
            up: Complex64::new((theta / 2.0).cos(), 0.0),
            down: Complex64::from_polar((theta / 2.0).sin(), phi),
        }
    }

    pub fn up_amplitude(&self) -> Complex64 {
        self.up
    }

    pub fn down_amplitude(&self) -> Complex64 {
        self.down
    }
}

impl Default for SpinWeights {
    fn default() -> Self {
        Self::up()
    }
}

/// Parameters of a Gaussian packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketSpec {
    /// Inverse width (lattice units).
    pub alpha: f64,
    /// Carrier momentum.
    pub k0: f64,
    /// Center `N_A`, a (possibly non-integer) site coordinate in `[1, N]`.
    pub center: f64,
    pub spin: SpinWeights,
}

impl PacketSpec {
    pub fn new(alpha: f64, k0: f64, center: f64) -> Self {
        PacketSpec {
            alpha,
            k0,
            center,
            spin: SpinWeights::up(),
        }
    }

    pub fn with_spin(mut self, spin: SpinWeights) -> Self {
        self.spin = spin;
        self
    }
}

/// Two-component lattice wavefunction: one amplitude vector per spin.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    pub up: DVector<Complex64>,
    pub down: DVector<Complex64>,
}

impl SpinState {
    pub fn new(up: DVector<Complex64>, down: DVector<Complex64>) -> Result<Self> {
        if up.len() != down.len() {
            return Err(Error::DimensionMismatch {
                expected: up.len(),
                found: down.len(),
            });
        }
        Ok(SpinState { up, down })
    }

    /// Spin-up particle localised on `site` (1-based).
    pub fn site(n_sites: usize, site: usize) -> Self {
        let mut up = DVector::zeros(n_sites);
        up[site - 1] = Complex64::new(1.0, 0.0);
        SpinState {
            up,
            down: DVector::zeros(n_sites),
        }
    }

    /// Places a normalised spatial profile into both spin channels.
    pub fn from_spatial(spatial: DVector<Complex64>, spin: SpinWeights) -> Self {
        SpinState {
            up: &spatial * spin.up,
            down: spatial * spin.down,
        }
    }

    pub fn n_sites(&self) -> usize {
        self.up.len()
    }

    pub fn components(&self) -> [&DVector<Complex64>; 2] {
        [&self.up, &self.down]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.up.norm_squared() + self.down.norm_squared()
    }

    /// Site occupation `Σ_σ |ψ_σ(j)|²`, indexed `0..N` for sites `1..=N`.
    pub fn density(&self) -> Vec<f64> {
        self.up
            .iter()
            .zip(self.down.iter())
            .map(|(u, d)| u.norm_sqr() + d.norm_sqr())
            .collect()
    }

    /// `⟨self|other⟩` summed over both spin components.
    pub fn inner(&self, other: &SpinState) -> Result<Complex64> {
        self.check_dim(other)?;
        Ok(self.up.dotc(&other.up) + self.down.dotc(&other.down))
    }

    /// Euclidean distance between the two state vectors.
    pub fn distance(&self, other: &SpinState) -> Result<f64> {
        self.check_dim(other)?;
        Ok(((&self.up - &other.up).norm_squared() + (&self.down - &other.down).norm_squared()).sqrt())
    }

    pub(crate) fn check_dim(&self, other: &SpinState) -> Result<()> {
        if self.n_sites() != other.n_sites() {
            return Err(Error::DimensionMismatch {
                expected: self.n_sites(),
                found: other.n_sites(),
            });
        }
        Ok(())
    }
}

/// Normalised Gaussian profile `e^{-(α²/2)(j-c)²} e^{ik₀j} / √Ω₁` on `1..=N`.
pub(crate) fn gaussian_profile(n_sites: usize, alpha: f64, k0: f64, center: f64) -> DVector<Complex64> {
    let a2 = alpha * alpha;
    let omega: f64 = (1..=n_sites)
        .map(|j| {
            let d = j as f64 - center;
            (-a2 * d * d).exp()
        })
        .sum();
    let scale = 1.0 / omega.sqrt();
    DVector::from_iterator(
        n_sites,
        (1..=n_sites).map(|j| {
            let d = j as f64 - center;
            Complex64::from_polar(scale * (-0.5 * a2 * d * d).exp(), k0 * j as f64)
        }),
    )
}

pub fn gaussian_packet(lattice: &LatticeSpec, spec: &PacketSpec) -> Result<SpinState> {
    let n = lattice.n_sites();
    if !(spec.alpha > 0.0 && spec.alpha.is_finite()) {
        return Err(Error::NonPositiveAlpha(spec.alpha));
    }
    if !(spec.center >= 1.0 && spec.center <= n as f64) {
        return Err(Error::CenterOutOfRange {
            center: spec.center,
            n_sites: n,
        });
    }
    let check = width_check(spec.alpha, n, DEFAULT_WIDTH_STRICTNESS);
    if !check.ok {
        log::warn!(
            "packet half-width {:.3} is not small against N = {} (margin {:.2}); the envelope may self-overlap",
            check.half_width,
            n,
            check.margin
        );
    }
    Ok(SpinState::from_spatial(
        gaussian_profile(n, spec.alpha, spec.k0, spec.center),
        spec.spin,
    ))
}

/// Outcome of the locality test `2√(ln 2)/α ≪ N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidthCheck {
    pub ok: bool,
    /// Packet half-width `2√(ln 2)/α`.
    pub half_width: f64,
    /// `N α / (2√(ln 2))`: how many half-widths fit on the lattice.
    pub margin: f64,
}

/// Passes when the lattice holds at least `strictness` packet half-widths.
pub fn width_check(alpha: f64, n_sites: usize, strictness: f64) -> WidthCheck {
    let half_width = 2.0 * std::f64::consts::LN_2.sqrt() / alpha;
    let margin = n_sites as f64 / half_width;
    WidthCheck {
        ok: margin >= strictness,
        half_width,
        margin,
    }
}

/// Momentum carried by the flying-qubit encoding.
pub const QUBIT_MOMENTUM: f64 = PI / 2.0;

/// Spin qubit `cos(θ/2)|↑⟩ + sin(θ/2)e^{iφ}|↓⟩` riding on a Gaussian packet
/// with momentum π/2.
pub fn encode_qubit(theta: f64, phi_angle: f64, lattice: &LatticeSpec, alpha: f64, center: f64) -> Result<SpinState> {
    encode_qubit_with_momentum(theta, phi_angle, lattice, alpha, center, QUBIT_MOMENTUM)
}

pub fn encode_qubit_with_momentum(
    theta: f64,
    phi_angle: f64,
    lattice: &LatticeSpec,
    alpha: f64,
    center: f64,
    k0: f64,
) -> Result<SpinState> {
    let spec = PacketSpec::new(alpha, k0, center).with_spin(SpinWeights::bloch(theta, phi_angle));
    gaussian_packet(lattice, &spec)
}

/// Multiplies every site amplitude by `e^{i k₀ j}`.
pub fn momentum_boost(state: &SpinState, k0: f64) -> SpinState {
    let phases = DVector::from_iterator(
        state.n_sites(),
        (1..=state.n_sites()).map(|j| Complex64::from_polar(1.0, k0 * j as f64)),
    );
    SpinState {
        up: state.up.component_mul(&phases),
        down: state.down.component_mul(&phases),
    }
}
