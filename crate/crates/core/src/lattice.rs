//! Lattice geometry, the single-particle Hamiltonian and its eigensystem.
//!
//! The ring Hamiltonian is
//!
//! ```text
//! H[φ] = -J Σ_j ( e^{i 2π φ / N} |j⟩⟨j+1| + h.c. ),   j + 1 taken mod N
//! ```
//!
//! with the flux `φ` measured in flux quanta. Its plane-wave modes
//! `e^{ikj}/√N`, `k = 2πm/N`, carry energy `-2J cos(k + 2πφ/N)`. The open
//! chain drops the `N ↔ 1` bond; its modes are `√(2/(N+1)) sin(k i)` with
//! pseudo-momentum `k = πl/(N+1)`, `l = 1..=N`, and energy `-2J cos k`.
//!
//! Spin never enters the Hamiltonian, so every matrix here acts on one spin
//! component at a time.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Momentum values closer than this (in units of the grid spacing) to a grid
/// point are accepted as on-grid.
const GRID_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    Ring,
    Chain,
}

/// Geometry and couplings of a one-dimensional lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    topology: Topology,
    n_sites: usize,
    hopping: f64,
    flux: f64,
}

impl LatticeSpec {
    pub fn new(topology: Topology, n_sites: usize, hopping: f64, flux: f64) -> Result<Self> {
        if n_sites < 3 {
            return Err(Error::TooFewSites(n_sites));
        }
        if !(hopping.is_finite() && hopping > 0.0) {
            return Err(Error::InvalidHopping(hopping));
        }
        if !flux.is_finite() {
            return Err(Error::InvalidFlux(flux));
        }
        if topology == Topology::Chain && flux != 0.0 {
            return Err(Error::FluxOnChain(flux));
        }
        Ok(LatticeSpec {
            topology,
            n_sites,
            hopping,
            flux,
        })
    }

    pub fn ring(n_sites: usize, hopping: f64, flux: f64) -> Result<Self> {
        Self::new(Topology::Ring, n_sites, hopping, flux)
    }

    pub fn chain(n_sites: usize, hopping: f64) -> Result<Self> {
        Self::new(Topology::Chain, n_sites, hopping, 0.0)
    }

    /// Ring whose flux is given as the hopping phase `2πφ/N` instead of `φ`.
    pub fn ring_with_phase(n_sites: usize, hopping: f64, phase: f64) -> Result<Self> {
        let n = n_sites.max(1) as f64;
        Self::ring(n_sites, hopping, phase * n / (2.0 * PI))
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn hopping(&self) -> f64 {
        self.hopping
    }

    pub fn flux(&self) -> f64 {
        self.flux
    }

    /// Peierls phase `2πφ/N` carried by each forward bond.
    pub fn phase(&self) -> f64 {
        2.0 * PI * self.flux / self.n_sites as f64
    }

    pub fn is_ring(&self) -> bool {
        self.topology == Topology::Ring
    }
}

/// Dense Hermitian single-particle Hamiltonian, indexed by site `0..N`
/// (site `j` of the lattice lives at index `j - 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix(DMatrix<Complex64>);

impl HamiltonianMatrix {
    /// Wraps an arbitrary square matrix after checking Hermiticity to 1e-12.
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let dev = hermiticity_defect(&matrix);
        if dev > 1e-12 {
            return Err(Error::NotHermitian(dev));
        }
        Ok(HamiltonianMatrix(matrix))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }

    /// Largest entrywise deviation `|H - H†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.0)
    }

    /// `⟨v|H|v⟩` for a single spin component.
    pub fn expectation(&self, v: &DVector<Complex64>) -> Result<f64> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(v.dotc(&(&self.0 * v)).re)
    }
}

fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn build_hamiltonian(spec: &LatticeSpec) -> HamiltonianMatrix {
    let n = spec.n_sites;
    let j = spec.hopping;
    let mut h = DMatrix::<Complex64>::zeros(n, n);
    let forward = Complex64::from_polar(-j, spec.phase());
    for a in 0..n - 1 {
        h[(a, a + 1)] = forward;
        h[(a + 1, a)] = forward.conj();
    }
    if spec.topology == Topology::Ring {
        h[(n - 1, 0)] = forward;
        h[(0, n - 1)] = forward.conj();
    }
    HamiltonianMatrix(h)
}

/// Flux at which the ring dispersion is linear around `k = 0`:
/// `φ_n = (n/2 + 1/4) N`.
pub fn quantized_flux(n: u32, n_sites: usize) -> f64 {
    (0.5 * n as f64 + 0.25) * n_sites as f64
}

/// Effective velocity `(-1)^n 2J` of a packet near `k = 0` at flux `φ_n`.
pub fn resonant_velocity(n: u32, hopping: f64) -> f64 {
    if n.is_multiple_of(2) {
        2.0 * hopping
    } else {
        -2.0 * hopping
    }
}

/// Integer ring momentum labels `m` with `k = 2πm/N`, in the symmetric window
/// `-⌊N/2⌋ ..= ⌈N/2⌉ - 1`.
pub fn ring_momentum_labels(n_sites: usize) -> impl Iterator<Item = i64> {
    let n = n_sites as i64;
    let lo = -(n / 2);
    let hi = (n + 1) / 2 - 1;
    lo..=hi
}

fn ring_energy(spec: &LatticeSpec, k: f64) -> f64 {
    -2.0 * spec.hopping * (k + spec.phase()).cos()
}

fn chain_energy(spec: &LatticeSpec, k: f64) -> f64 {
    -2.0 * spec.hopping * k.cos()
}

/// Band energy at an allowed momentum of the lattice.
///
/// Ring momenta must lie on `2πm/N` (any integer `m`); chain pseudo-momenta
/// on `πl/(N+1)` with `l = 1..=N`.
pub fn dispersion(spec: &LatticeSpec, k: f64) -> Result<f64> {
    let n = spec.n_sites as f64;
    match spec.topology {
        Topology::Ring => {
            let m = k * n / (2.0 * PI);
            if (m - m.round()).abs() > GRID_TOLERANCE {
                return Err(Error::OffGrid { k, grid: "ring" });
            }
            Ok(ring_energy(spec, k))
        }
        Topology::Chain => {
            let l = k * (n + 1.0) / PI;
            let lr = l.round();
            if (l - lr).abs() > GRID_TOLERANCE || lr < 1.0 || lr > n {
                return Err(Error::OffGrid { k, grid: "chain" });
            }
            Ok(chain_energy(spec, k))
        }
    }
}

/// Eigenvalues and orthonormal eigenvectors (as matrix columns) of the
/// single-particle Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenBasis {
    energies: Vec<f64>,
    modes: DMatrix<Complex64>,
    momenta: Vec<f64>,
    labels: Vec<i64>,
}

impl EigenBasis {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Modes as columns; column `a` has energy `energies()[a]`.
    pub fn modes(&self) -> &DMatrix<Complex64> {
        &self.modes
    }

    /// Momentum (ring) or pseudo-momentum (chain) of each mode.
    pub fn momenta(&self) -> &[f64] {
        &self.momenta
    }

    /// Integer label of each mode: `m` for the ring, `l` for the chain.
    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn mode(&self, a: usize) -> DVector<Complex64> {
        self.modes.column(a).into_owned()
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let gram = self.modes.adjoint() * &self.modes;
        let n = self.dim();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((gram[(a, b)] - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    /// Largest eigen-residual norm `‖H v_a − ε_a v_a‖`.
    pub fn residual(&self, h: &HamiltonianMatrix) -> f64 {
        (0..self.dim())
            .map(|a| {
                let v = self.modes.column(a);
                let r = h.matrix() * v - v * Complex64::new(self.energies[a], 0.0);
                r.norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Exact eigensystem built from the closed-form modes.
///
/// Ring modes are ordered by momentum label `m` (symmetric window); chain
/// modes by `l = 1..=N`, which is ascending in energy.
pub fn eigensystem(spec: &LatticeSpec) -> EigenBasis {
    let n = spec.n_sites;
    let nf = n as f64;
    match spec.topology {
        Topology::Ring => {
            let labels: Vec<i64> = ring_momentum_labels(n).collect();
            let momenta: Vec<f64> = labels.iter().map(|&m| 2.0 * PI * m as f64 / nf).collect();
            let energies = momenta.iter().map(|&k| ring_energy(spec, k)).collect();
            let norm = 1.0 / nf.sqrt();
            let modes = DMatrix::from_fn(n, n, |site, a| {
                Complex64::from_polar(norm, momenta[a] * (site + 1) as f64)
            });
            EigenBasis {
                energies,
                modes,
                momenta,
                labels,
            }
        }
        Topology::Chain => {
            let labels: Vec<i64> = (1..=n as i64).collect();
            let momenta: Vec<f64> = labels.iter().map(|&l| PI * l as f64 / (nf + 1.0)).collect();
            let energies = momenta.iter().map(|&k| chain_energy(spec, k)).collect();
            let norm = (2.0 / (nf + 1.0)).sqrt();
            let modes = DMatrix::from_fn(n, n, |site, a| {
                Complex64::new(norm * (momenta[a] * (site + 1) as f64).sin(), 0.0)
            });
            EigenBasis {
                energies,
                modes,
                momenta,
                labels,
            }
        }
    }
}

/// Eigensystem from a generic dense Hermitian solver, ascending in energy.
///
/// Independent of the closed forms in [`eigensystem`]; used to cross-check
/// them. Labels and momenta are left as the position in the sorted spectrum.
pub fn numeric_eigensystem(h: &HamiltonianMatrix) -> EigenBasis {
    let n = h.dim();
    let eig = SymmetricEigen::new(h.matrix().clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energies: Vec<f64> = order.iter().map(|&a| eig.eigenvalues[a]).collect();
    let modes = DMatrix::from_fn(n, n, |i, a| eig.eigenvectors[(i, order[a])]);
    EigenBasis {
        energies,
        modes,
        momenta: (0..n).map(|a| a as f64).collect(),
        labels: (0..n as i64).collect(),
    }
}

/// Compares two eigensystems of the same operator.
///
/// Energies are compared after sorting. Eigenvectors are compared through
/// spectral projectors on clusters of (near-)degenerate energies, so the
/// arbitrary basis choice inside a degenerate subspace does not matter.
/// Returns `(max energy discrepancy, max projector discrepancy)`.
pub fn compare_eigensystems(a: &EigenBasis, b: &EigenBasis, cluster_tol: f64) -> (f64, f64) {
    let sorted = |basis: &EigenBasis| {
        let mut idx: Vec<usize> = (0..basis.dim()).collect();
        idx.sort_by(|&x, &y| basis.energies[x].total_cmp(&basis.energies[y]));
        idx
    };
    let ia = sorted(a);
    let ib = sorted(b);
    let energy_gap = ia
        .iter()
        .zip(&ib)
        .map(|(&x, &y)| (a.energies[x] - b.energies[y]).abs())
        .fold(0.0, f64::max);

    let n = a.dim();
    let mut projector_gap = 0.0f64;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && a.energies[ia[end]] - a.energies[ia[end - 1]] < cluster_tol {
            end += 1;
        }
        let proj = |basis: &EigenBasis, cols: &[usize]| {
            let mut p = DMatrix::<Complex64>::zeros(n, n);
            for &c in cols {
                let v = basis.modes.column(c);
                p += v * v.adjoint();
            }
            p
        };
        let pa = proj(a, &ia[start..end]);
        let pb = proj(b, &ib[start..end]);
        projector_gap = projector_gap.max((pa - pb).norm());
        start = end;
    }
    (energy_gap, projector_gap)
}
