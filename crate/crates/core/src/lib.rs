//! Single-electron wave-packet dynamics on one-dimensional tight-binding
//! lattices: flux-threaded rings and open chains.
//!
//! The crate is organised bottom-up:
//!
//! - [`lattice`]: geometry, flux, Hamiltonian and exact eigensystems.
//! - [`wavepacket`]: Gaussian packets, spin-encoded qubits and momentum boosts.
//! - [`propagator`]: exact spectral evolution, a matrix-exponential oracle,
//!   the linear-regime translation operator and the analytic spreading packet.
//! - [`analysis`]: autocorrelation, interference fringes, revivals and
//!   qubit-transfer fidelity.
//!
//! Units: ħ = 1, lattice spacing 1, energies in units of the hopping `J`,
//! times in units of `1/J`. Sites are numbered `1..=N`.

pub mod analysis;
pub mod error;
pub mod exec;
pub mod lattice;
pub mod propagator;
pub mod wavepacket;

pub use error::{Error, Result};
pub use exec::Execution;
pub use lattice::{EigenBasis, HamiltonianMatrix, LatticeSpec, Topology};
pub use propagator::SpectralPropagator;
pub use wavepacket::{PacketSpec, SpinState, SpinWeights};

pub use num_complex::Complex64;
