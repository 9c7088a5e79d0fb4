//! Exact circuit simulation: pure states for noiseless runs, density
//! matrices for noisy runs, and seeded finite-shot sampling.
//!
//! Bit order is fixed crate-wide: qubit `q` is bit `q` of a basis index, so
//! qubit 0 is the least-significant bit of every outcome.

mod density;
mod gate;
mod kernel;
mod pauli;
mod sampling;
mod state;
mod unitary;

pub use density::{apply_kraus, evolve_density, DensityMatrix, KRAUS_TOLERANCE};
pub use gate::{kron_lsb_first, pauli_x, pauli_y, pauli_z, ry_matrix, CMatrix, Gate};
pub use pauli::{Pauli, PauliString};
pub use sampling::{derive_seed, rng_from_seed, sample_counts, sample_counts_with, sample_outcome, SimRng};
pub use state::{apply_gate, probabilities, StateVector, MAX_QUBITS};
pub use unitary::{circuit_unitary, max_abs_diff, phase_insensitive_fidelity, unitarity_error, MAX_UNITARY_QUBITS};
