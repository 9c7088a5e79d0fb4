use num_complex::Complex64;

use super::gate::Gate;
use super::kernel::apply_gate_shifted;
use crate::circuit::Circuit;
use crate::distribution::Distribution;
use crate::error::{Error, Result};

/// Largest register the dense simulators accept.
pub const MAX_QUBITS: usize = 12;

/// Pure state on `n_qubits` qubits; amplitude index bit `q` is qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        check_size(n_qubits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let mut s = Self::zero(n_qubits)?;
        if index >= s.amps.len() {
            return Err(Error::DimensionMismatch { expected: s.amps.len(), found: index });
        }
        s.amps[0] = Complex64::new(0.0, 0.0);
        s.amps[index] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Wraps explicit amplitudes; the norm must be one within 1e-9.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n_qubits = amps.len().trailing_zeros() as usize;
        if amps.is_empty() || 1 << n_qubits != amps.len() {
            return Err(Error::DimensionMismatch { expected: 1 << n_qubits.max(1), found: amps.len() });
        }
        check_size(n_qubits)?;
        let s = Self { n_qubits, amps };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!("state norm² is {norm}")));
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        apply_gate_shifted(&mut self.amps, gate, 0, false);
        Ok(())
    }

    /// Runs every gate of `circuit` in order.
    pub fn run(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: circuit.n_qubits() });
        }
        for g in circuit.gates() {
            apply_gate_shifted(&mut self.amps, g, 0, false);
        }
        Ok(())
    }

    /// Born-rule marginal over `measured`; `measured[j]` becomes bit `j` of
    /// the outcome index.
    pub fn probabilities(&self, measured: &[usize]) -> Result<Distribution> {
        validate_measured(measured, self.n_qubits)?;
        let mut probs = vec![0.0; 1 << measured.len()];
        for (i, a) in self.amps.iter().enumerate() {
            probs[extract_bits(i, measured)] += a.norm_sqr();
        }
        Distribution::new(probs)
    }

    /// Full probability vector over all qubits.
    pub fn all_probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Returns `U|ψ⟩` without modifying the input.
pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

/// Marginal probabilities of `measured` for the pure state `state`.
pub fn probabilities(state: &StateVector, measured: &[usize]) -> Result<Distribution> {
    state.probabilities(measured)
}

pub(crate) fn check_size(n_qubits: usize) -> Result<()> {
    if n_qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits { n: n_qubits, max: MAX_QUBITS });
    }
    Ok(())
}

pub(crate) fn validate_measured(measured: &[usize], n_qubits: usize) -> Result<()> {
    if measured.is_empty() {
        return Err(Error::EmptyQubitList);
    }
    for (i, &q) in measured.iter().enumerate() {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
        }
        if measured[..i].contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
    }
    Ok(())
}

/// Gathers the bits of `index` at positions `qubits` into a compact index.
#[inline]
pub(crate) fn extract_bits(index: usize, qubits: &[usize]) -> usize {
    qubits.iter().enumerate().fold(0, |acc, (j, &q)| acc | ((index >> q) & 1) << j)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    use super::*;

    fn close(a: Complex64, b: f64) -> bool {
        (a - Complex64::new(b, 0.0)).norm() < 1e-12
    }

    #[test]
    fn ry_pi_flips() {
        let s = apply_gate(&StateVector::zero(1).unwrap(), &Gate::ry(0, PI)).unwrap();
        assert!(close(s.amplitudes()[1], 1.0));
        assert!(close(s.amplitudes()[0], 0.0));
    }

    #[test]
    fn ry_half_pi_balances() {
        let s = apply_gate(&StateVector::zero(1).unwrap(), &Gate::ry(0, PI / 2.0)).unwrap();
        assert!(close(s.amplitudes()[0], FRAC_1_SQRT_2));
        assert!(close(s.amplitudes()[1], FRAC_1_SQRT_2));
    }

    #[test]
    fn cz_phases_11() {
        let s = apply_gate(&StateVector::basis(2, 3).unwrap(), &Gate::cz(0, 1)).unwrap();
        assert!(close(s.amplitudes()[3], -1.0));
    }

    #[test]
    fn out_of_range_target() {
        let s = StateVector::zero(2).unwrap();
        assert!(matches!(apply_gate(&s, &Gate::X(2)), Err(Error::QubitOutOfRange { .. })));
    }

    #[test]
    fn bell_marginal() {
        let mut s = StateVector::zero(2).unwrap();
        s.apply(&Gate::H(0)).unwrap();
        // CNOT(0→1) = H1 CZ H1
        s.apply(&Gate::H(1)).unwrap();
        s.apply(&Gate::cz(0, 1)).unwrap();
        s.apply(&Gate::H(1)).unwrap();
        let p = s.probabilities(&[0]).unwrap();
        assert!((p.probs()[0] - 0.5).abs() < 1e-12 && (p.probs()[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn product_state_outcome_bits() {
        // qubit 1 in |1⟩, qubit 0 in |0⟩: outcome "10" is index 2
        let mut s = StateVector::zero(2).unwrap();
        s.apply(&Gate::X(1)).unwrap();
        let p = s.probabilities(&[0, 1]).unwrap();
        assert_eq!(p.probs(), &[0.0, 0.0, 1.0, 0.0]);
        // reordered measurement list swaps bit positions
        assert_eq!(s.probabilities(&[1, 0]).unwrap().probs(), &[0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn measured_list_errors() {
        let s = StateVector::zero(2).unwrap();
        assert!(matches!(s.probabilities(&[]), Err(Error::EmptyQubitList)));
        assert!(matches!(s.probabilities(&[0, 0]), Err(Error::DuplicateQubit(0))));
        assert!(StateVector::zero(13).is_err());
    }
}
