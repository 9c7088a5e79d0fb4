use log::debug;
use nalgebra::DMatrix;
use num_complex::Complex64;

use super::gate::{CMatrix, Gate, ZERO};
use super::kernel::{apply_gate_shifted, apply_kq};
use super::pauli::PauliString;
use super::state::{check_size, extract_bits, validate_measured, StateVector};
use crate::circuit::Circuit;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::noise::{amplitude_damping_kraus, NoiseModel};

/// Tolerance for Kraus completeness checks.
pub const KRAUS_TOLERANCE: f64 = 1e-9;
const RENORMALIZE_DRIFT: f64 = 1e-12;

/// Mixed state stored as a row-major `2^n × 2^n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    /// `|0…0⟩⟨0…0|`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        check_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        let mut data = vec![ZERO; dim * dim];
        data[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, data })
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        let mut rho = Self::zero(n_qubits)?;
        let dim = rho.dim();
        rho.data[0] = ZERO;
        for i in 0..dim {
            rho.data[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Ok(rho)
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_state(state: &StateVector) -> Self {
        let amps = state.amplitudes();
        let dim = amps.len();
        let mut data = vec![ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[r * dim + c] = amps[r] * amps[c].conj();
            }
        }
        Self { n_qubits: state.n_qubits(), data }
    }

    /// Wraps an explicit matrix after checking the density-matrix invariants.
    pub fn from_matrix(m: &CMatrix) -> Result<Self> {
        let rho = Self::from_operator(m)?;
        rho.check_valid()?;
        Ok(rho)
    }

    /// Wraps any `2^n × 2^n` operator. Channels act linearly on it, which is
    /// what transfer-matrix construction needs.
    pub(crate) fn from_operator(m: &CMatrix) -> Result<Self> {
        let dim = m.nrows();
        let n_qubits = dim.trailing_zeros() as usize;
        if dim == 0 || m.ncols() != dim || 1 << n_qubits != dim {
            return Err(Error::DimensionMismatch { expected: dim.next_power_of_two(), found: m.ncols() });
        }
        check_size(n_qubits)?;
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(m[(r, c)]);
            }
        }
        Ok(Self { n_qubits, data })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// `self + c·other`.
    pub(crate) fn add_scaled(mut self, other: &DensityMatrix, c: f64) -> Self {
        self.data.iter_mut().zip(&other.data).for_each(|(a, b)| *a += b * c);
        self
    }

    pub(crate) fn scaled(mut self, c: f64) -> Self {
        self.data.iter_mut().for_each(|a| *a *= c);
        self
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn to_matrix(&self) -> CMatrix {
        let dim = self.dim();
        DMatrix::from_row_slice(dim, dim, &self.data)
    }

    pub fn trace(&self) -> f64 {
        let dim = self.dim();
        (0..dim).map(|i| self.data[i * dim + i].re).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let dim = self.dim();
        (0..dim).map(|i| self.data[i * dim + i].re).collect()
    }

    /// Largest elementwise difference to `other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Hermitian within 1e-9, unit trace within 1e-9, eigenvalues ≥ −1e-8.
    pub fn check_valid(&self) -> Result<()> {
        let dim = self.dim();
        for r in 0..dim {
            for c in r..dim {
                if (self.data[r * dim + c] - self.data[c * dim + r].conj()).norm() > 1e-9 {
                    return Err(Error::InvalidDistribution(format!("density matrix not Hermitian at ({r},{c})")));
                }
            }
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!("density matrix trace {tr}")));
        }
        let eig = self.to_matrix().symmetric_eigenvalues();
        let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -1e-8 {
            return Err(Error::InvalidDistribution(format!("density matrix eigenvalue {min}")));
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.conjugate_by_gate(gate);
        Ok(())
    }

    fn conjugate_by_gate(&mut self, gate: &Gate) {
        apply_gate_shifted(&mut self.data, gate, self.n_qubits, false);
        apply_gate_shifted(&mut self.data, gate, 0, true);
    }

    /// `ρ ↦ K ρ K†` for one operator on `qubits` (no completeness check).
    fn sandwich(&mut self, k: &CMatrix, qubits: &[usize]) {
        let rows: Vec<usize> = qubits.iter().map(|q| q + self.n_qubits).collect();
        apply_kq(&mut self.data, &rows, k);
        apply_kq(&mut self.data, qubits, &k.map(|z| z.conj()));
    }

    /// `ρ ↦ Σ Kᵢ ρ Kᵢ†`; rejects Kraus sets with `‖Σ Kᵢ†Kᵢ − I‖ > 1e-9`.
    pub fn apply_kraus(&mut self, kraus: &[CMatrix], qubits: &[usize]) -> Result<()> {
        validate_measured(qubits, self.n_qubits)?;
        let local = 1usize << qubits.len();
        for k in kraus {
            if k.nrows() != local || k.ncols() != local {
                return Err(Error::DimensionMismatch { expected: local, found: k.nrows() });
            }
        }
        let deviation = completeness_deviation(kraus, local);
        if deviation > KRAUS_TOLERANCE {
            return Err(Error::NotTracePreserving(deviation));
        }
        let mut acc = vec![ZERO; self.data.len()];
        for k in kraus {
            let mut term = self.clone();
            term.sandwich(k, qubits);
            acc.iter_mut().zip(&term.data).for_each(|(a, t)| *a += t);
        }
        self.data = acc;
        Ok(())
    }

    /// Depolarizing channel `(1−p)ρ + p/(4^k−1) Σ_{P≠I} PρP` on `qubits`,
    /// evaluated through the equivalent partial-trace form.
    pub fn depolarize(&mut self, p: f64, qubits: &[usize]) -> Result<()> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability { what: "depolarizing p", value: p });
        }
        validate_measured(qubits, self.n_qubits)?;
        if p == 0.0 {
            return Ok(());
        }
        let k = qubits.len();
        let four_k = (1usize << (2 * k)) as f64;
        let lambda = p * four_k / (four_k - 1.0);
        let local = 1usize << k;
        let dim = self.dim();
        let mask: usize = qubits.iter().map(|q| 1usize << q).sum();
        let offsets: Vec<usize> = (0..local)
            .map(|l| qubits.iter().enumerate().filter(|(j, _)| l >> j & 1 == 1).map(|(_, q)| 1usize << q).sum())
            .collect();
        let keep = 1.0 - lambda;
        let mixed = lambda / local as f64;
        for r in (0..dim).filter(|r| r & mask == 0) {
            for c in (0..dim).filter(|c| c & mask == 0) {
                let tr: Complex64 = offsets.iter().map(|o| self.data[(r + o) * dim + c + o]).sum();
                for &ro in &offsets {
                    for &co in &offsets {
                        let idx = (r + ro) * dim + c + co;
                        self.data[idx] *= keep;
                        if ro == co {
                            self.data[idx] += tr * mixed;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Linear map `ρ ↦ Σ cᵢ PᵢρPᵢ` on `qubits`. Coefficients may be negative
    /// (quasi-probability mixtures); the trace scales by `Σ cᵢ`.
    pub fn apply_pauli_mixture(&mut self, terms: &[(f64, PauliString)], qubits: &[usize]) -> Result<()> {
        validate_measured(qubits, self.n_qubits)?;
        let mut acc = vec![ZERO; self.data.len()];
        for (coef, pauli) in terms {
            if pauli.len() != qubits.len() {
                return Err(Error::DimensionMismatch { expected: qubits.len(), found: pauli.len() });
            }
            let mut term = self.clone();
            for g in pauli.gates(qubits) {
                term.conjugate_by_gate(&g);
            }
            acc.iter_mut().zip(&term.data).for_each(|(a, t)| *a += t * *coef);
        }
        self.data = acc;
        Ok(())
    }

    /// Marginal probabilities of `measured` from the diagonal.
    pub fn probabilities(&self, measured: &[usize]) -> Result<Distribution> {
        validate_measured(measured, self.n_qubits)?;
        let mut probs = vec![0.0; 1 << measured.len()];
        for (i, d) in self.diagonal().into_iter().enumerate() {
            probs[extract_bits(i, measured)] += d.max(0.0);
        }
        Distribution::from_weights(probs)
    }

    fn renormalize_if_drifted(&mut self) {
        let tr = self.trace();
        if (tr - 1.0).abs() > RENORMALIZE_DRIFT {
            debug!("renormalizing density matrix with trace drift {:.3e}", tr - 1.0);
            self.data.iter_mut().for_each(|z| *z /= tr);
        }
    }
}

fn completeness_deviation(kraus: &[CMatrix], local: usize) -> f64 {
    let mut sum = CMatrix::zeros(local, local);
    for k in kraus {
        sum += k.adjoint() * k;
    }
    (sum - CMatrix::identity(local, local)).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Returns `Σ Kᵢ ρ Kᵢ†` on `qubits`, rejecting non-trace-preserving sets.
pub fn apply_kraus(rho: &DensityMatrix, kraus: &[CMatrix], qubits: &[usize]) -> Result<DensityMatrix> {
    let mut out = rho.clone();
    out.apply_kraus(kraus, qubits)?;
    Ok(out)
}

/// Applies the noise channel that `noise` attaches after `gate`.
fn apply_gate_noise(rho: &mut DensityMatrix, gate: &Gate, noise: &NoiseModel) -> Result<()> {
    let qubits = gate.qubits();
    let p = if gate.is_two_qubit() { noise.p2() } else { noise.p1() };
    if p > 0.0 {
        rho.depolarize(p, &qubits)?;
    }
    if noise.gamma_ad() > 0.0 {
        let ad = amplitude_damping_kraus(noise.gamma_ad())?;
        for q in qubits {
            rho.apply_kraus(&ad, &[q])?;
        }
    }
    Ok(())
}

/// Exact noisy evolution: each gate's unitary conjugation is followed by the
/// channel `noise` assigns to that gate. Readout error is not applied here.
pub fn evolve_density(rho: &DensityMatrix, circuit: &Circuit, noise: &NoiseModel) -> Result<DensityMatrix> {
    if circuit.n_qubits() != rho.n_qubits() {
        return Err(Error::DimensionMismatch { expected: rho.n_qubits(), found: circuit.n_qubits() });
    }
    let mut out = rho.clone();
    for gate in circuit.gates() {
        out.conjugate_by_gate(gate);
        apply_gate_noise(&mut out, gate, noise)?;
    }
    out.renormalize_if_drifted();
    Ok(out)
}
