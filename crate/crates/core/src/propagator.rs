//! Time evolution.
//!
//! [`SpectralPropagator`] is the workhorse: it expands a state in the exact
//! eigenbasis once and attaches the phases `e^{-iε t}`. The other routes are
//! approximations or checks against it:
//!
//! - [`evolve_dense_oracle`] exponentiates `-iHt` directly (small `N` only),
//!   sharing no code with the eigensolver path.
//! - [`translate`] is the linear-dispersion evolution `e^{-ipvt}`, a rigid
//!   shift of the packet around the ring.
//! - [`analytic_spread_packet`] is the closed-form Gaussian under the
//!   quadratic band `-2J + Jk²`.
//! - [`reflect_map`] folds a ballistic chain trajectory at the open ends.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::lattice::{eigensystem, EigenBasis, HamiltonianMatrix, LatticeSpec};
use crate::wavepacket::SpinState;

/// Exact propagator `e^{-iHt}` in the diagonal representation.
#[derive(Debug, Clone)]
pub struct SpectralPropagator {
    basis: EigenBasis,
    adjoint: DMatrix<Complex64>,
}

/// Expansion coefficients `⟨mode_a|ψ_σ⟩` of a state, per spin component.
#[derive(Debug, Clone)]
pub struct ModeOverlaps {
    pub up: DVector<Complex64>,
    pub down: DVector<Complex64>,
}

impl ModeOverlaps {
    /// `Σ_a |c_a|² e^{-iε_a t}` per spin component: the overlap of the
    /// expanded state with itself after time `t`.
    pub fn return_amplitudes(&self, energies: &[f64], t: f64) -> [Complex64; 2] {
        let sector = |c: &DVector<Complex64>| {
            c.iter()
                .zip(energies)
                .map(|(z, &e)| Complex64::from_polar(z.norm_sqr(), -e * t))
                .sum::<Complex64>()
        };
        [sector(&self.up), sector(&self.down)]
    }
}

impl SpectralPropagator {
    pub fn new(lattice: &LatticeSpec) -> Self {
        Self::from_basis(eigensystem(lattice))
    }

    pub fn from_basis(basis: EigenBasis) -> Self {
        let adjoint = basis.modes().adjoint();
        SpectralPropagator { basis, adjoint }
    }

    pub fn basis(&self) -> &EigenBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn overlaps(&self, state: &SpinState) -> Result<ModeOverlaps> {
        self.check(state)?;
        Ok(ModeOverlaps {
            up: &self.adjoint * &state.up,
            down: &self.adjoint * &state.down,
        })
    }

    /// Rebuilds the state at time `t` from precomputed overlaps.
    pub fn synthesize(&self, overlaps: &ModeOverlaps, t: f64) -> SpinState {
        let phases = DVector::from_iterator(
            self.dim(),
            self.basis
                .energies()
                .iter()
                .map(|&e| Complex64::from_polar(1.0, -e * t)),
        );
        SpinState {
            up: self.basis.modes() * overlaps.up.component_mul(&phases),
            down: self.basis.modes() * overlaps.down.component_mul(&phases),
        }
    }

    pub fn evolve(&self, state: &SpinState, t: f64) -> Result<SpinState> {
        self.check(state)?;
        if t == 0.0 {
            return Ok(state.clone());
        }
        let overlaps = self.overlaps(state)?;
        Ok(self.synthesize(&overlaps, t))
    }

    /// Evolves one initial state to every time in `times`.
    pub fn evolve_many(&self, state: &SpinState, times: &[f64], exec: Execution) -> Result<Vec<SpinState>> {
        let overlaps = self.overlaps(state)?;
        Ok(exec.map(times, |&t| {
            if t == 0.0 {
                state.clone()
            } else {
                self.synthesize(&overlaps, t)
            }
        }))
    }

    fn check(&self, state: &SpinState) -> Result<()> {
        if state.n_sites() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: state.n_sites(),
            });
        }
        Ok(())
    }
}

/// Largest lattice the dense oracle accepts.
pub const ORACLE_MAX_SITES: usize = 64;

/// `e^{-iHt}|ψ⟩` by Taylor-series scaling and squaring of the dense matrix.
pub fn evolve_dense_oracle(h: &HamiltonianMatrix, state: &SpinState, t: f64) -> Result<SpinState> {
    let n = h.dim();
    if n > ORACLE_MAX_SITES {
        return Err(Error::OracleTooLarge(n));
    }
    if state.n_sites() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: state.n_sites(),
        });
    }
    let u = expm(&(h.matrix() * Complex64::new(0.0, -t)));
    Ok(SpinState {
        up: &u * &state.up,
        down: &u * &state.down,
    })
}

fn one_norm(m: &DMatrix<Complex64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential: scale to norm ≤ 1/2, sum the Taylor series to
/// round-off, then square back up.
fn expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    let norm = one_norm(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a * Complex64::new(0.5f64.powi(squarings), 0.0);
    let mut result = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..=40 {
        term = &term * &scaled * Complex64::new(1.0 / k as f64, 0.0);
        result += &term;
        if one_norm(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Ring translation `T(x₀)`: multiplies each plane-wave coefficient by
/// `e^{-ik x₀}`, so `T(x₀)|j⟩ = |j + x₀⟩` for integer `x₀` and band-limited
/// interpolation otherwise.
pub fn translate(state: &SpinState, lattice: &LatticeSpec, x0: f64) -> Result<SpinState> {
    if !lattice.is_ring() {
        return Err(Error::RequiresRing);
    }
    let basis = eigensystem(lattice);
    let prop = SpectralPropagator::from_basis(basis);
    let overlaps = prop.overlaps(state)?;
    let phases = DVector::from_iterator(
        prop.dim(),
        prop.basis()
            .momenta()
            .iter()
            .map(|&k| Complex64::from_polar(1.0, -k * x0)),
    );
    let modes = prop.basis().modes();
    Ok(SpinState {
        up: modes * overlaps.up.component_mul(&phases),
        down: modes * overlaps.down.component_mul(&phases),
    })
}

/// Initial data for the analytic spreading packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticSpreadParams {
    pub alpha0: f64,
    pub k0: f64,
    pub center0: f64,
    pub hopping: f64,
}

impl AnalyticSpreadParams {
    /// Inverse width after time `t`: `α' = α/√(1 + 4α⁴J²t²)`.
    pub fn width_at(&self, t: f64) -> f64 {
        let a = self.alpha0;
        a / (1.0 + 4.0 * a.powi(4) * self.hopping.powi(2) * t * t).sqrt()
    }

    /// Center after time `t`: `N_A + 2Jk₀t`.
    pub fn center_at(&self, t: f64) -> f64 {
        self.center0 + 2.0 * self.hopping * self.k0 * t
    }

    /// Phase field `k₀j + 2Jt − Jk₀²t + Jt(j − N_c)²α²α'²`.
    pub fn phase_at(&self, j: f64, t: f64) -> f64 {
        let jh = self.hopping;
        let ap = self.width_at(t);
        let d = j - self.center_at(t);
        self.k0 * j + 2.0 * jh * t - jh * self.k0 * self.k0 * t + jh * t * d * d * self.alpha0 * self.alpha0 * ap * ap
    }
}

/// Spin-up Gaussian evolved under the quadratic band `ε_k = -2J + Jk²` on an
/// unbounded lattice, sampled on sites `1..=N` and renormalised there.
///
/// The closed form ignores wrap-around; use it only while the packet stays
/// inside the sampled window.
pub fn analytic_spread_packet(params: &AnalyticSpreadParams, n_sites: usize, t: f64) -> SpinState {
    let ap = params.width_at(t);
    let nc = params.center_at(t);
    let raw: Vec<Complex64> = (1..=n_sites)
        .map(|j| {
            let x = j as f64;
            let d = x - nc;
            Complex64::from_polar((-0.5 * ap * ap * d * d).exp(), params.phase_at(x, t))
        })
        .collect();
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let up = DVector::from_iterator(n_sites, raw.into_iter().map(|z| z / norm));
    SpinState {
        up,
        down: DVector::zeros(n_sites),
    }
}

/// Mirror of a virtual packet center across an open end of an `N`-site
/// chain.
///
/// The chain's modes vanish on the virtual sites `0` and `N + 1`, so a packet
/// whose center has run past `N + 1` reappears at `2N + 2 − x` with its sign
/// flipped (and past `0` at `−x`). Centers inside `(0, N + 1)` are returned
/// unchanged with no flip.
pub fn reflect_map(x: f64, n_sites: usize) -> (f64, bool) {
    let wall = n_sites as f64 + 1.0;
    if x >= wall {
        (2.0 * wall - x, true)
    } else if x <= 0.0 {
        (-x, true)
    } else {
        (x, false)
    }
}

/// Folds an unbounded ballistic coordinate into `[0, N + 1]` by repeated
/// reflection at the open ends. Returns the folded position and whether the
/// packet has picked up an odd number of sign flips.
pub fn fold_trajectory(x: f64, n_sites: usize) -> (f64, bool) {
    let wall = n_sites as f64 + 1.0;
    let period = 2.0 * wall;
    let pos = x.rem_euclid(period);
    // a whole period is two reflections, so only the partial one matters
    if pos <= wall {
        (pos, false)
    } else {
        (period - pos, true)
    }
}
