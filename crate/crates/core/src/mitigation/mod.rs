//! Error mitigation: zero-noise extrapolation, probabilistic error
//! cancellation, Pauli twirling and readout-error correction.

mod pec;
mod readout;
mod twirl;
mod zne;

pub use pec::{
    invert_pauli_channel, pec_exact_density, pec_gamma_total, pec_invert_depolarizing, pec_mitigated_distribution,
    PecEstimate, QuasiProbabilityRep,
};
pub use readout::{
    measurement_calibrate, measurement_mitigate, mitigate_distribution, project_simplex, Calibration,
    CalibrationScheme, ReadoutCorrection, ILL_CONDITIONED,
};
pub use twirl::{
    cz_conjugation_table, pauli_transfer_matrix, pauli_twirl, pauli_twirl_with, twirled_cz_noise_ptm, CzConjugation,
};
pub use zne::{extrapolate, zne_distribution, zne_from_executor, ExtrapolationFit, ExtrapolationMethod, ZneResult};

use crate::circuit::Circuit;
use crate::distribution::Distribution;
use crate::error::Result;
use crate::noise::{apply_readout_error, NoiseModel};
use crate::simcore::{evolve_density, sample_counts, DensityMatrix, StateVector};

/// Noiseless output distribution over the circuit's measured qubits.
pub fn ideal_distribution(circuit: &Circuit) -> Result<Distribution> {
    let mut psi = StateVector::zero(circuit.n_qubits())?;
    psi.run(circuit)?;
    psi.probabilities(&circuit.measured_qubits())
}

/// Exact output of the noisy pipeline: density-matrix evolution, marginal
/// over the measured qubits, then readout error.
pub fn noisy_distribution(circuit: &Circuit, noise: &NoiseModel) -> Result<Distribution> {
    let rho = evolve_density(&DensityMatrix::zero(circuit.n_qubits())?, circuit, noise)?;
    let measured = circuit.measured_qubits();
    apply_readout_error(&rho.probabilities(&measured)?, noise, &measured)
}

/// `dist` itself when `shots` is `None`, otherwise the empirical frequencies
/// of a seeded sample.
pub fn observe(dist: &Distribution, shots: Option<u64>, seed: u64) -> Result<Distribution> {
    match shots {
        None => Ok(dist.clone()),
        Some(n) => sample_counts(dist, n, seed)?.to_distribution(),
    }
}
