//! Exact-diagonalization simulator for adiabatic demagnetization of a linear
//! chain of dipolar-coupled spin-1/2 nuclei.
//!
//! All energies are expressed in units of the nearest-neighbour dipolar
//! constant `D12`, so the inverse spin temperature `beta` is dimensionless.
//!
//! Module map:
//!
//! * [`spin`] – single-spin operators and their embedding in the `2^N` product space.
//! * [`hamiltonian`] – Zeeman and full (untruncated) dipolar Hamiltonians, local field.
//! * [`spectrum`] – Hermitian diagonalization.
//! * [`thermo`] – Gibbs weights, entropy, heat capacity, magnetization.
//! * [`isentrope`] – constant-entropy field sweeps and the high-temperature reference.
//! * [`entanglement`] – reduced two-spin states, Wootters concurrence, phase boundary.

pub mod entanglement;
pub mod error;
pub mod hamiltonian;
pub mod isentrope;
pub mod spectrum;
pub mod spin;
pub mod thermo;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Largest supported chain length (`2^10 = 1024` basis states).
pub const MAX_SPINS: usize = 10;
