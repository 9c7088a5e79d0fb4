use nalgebra::DMatrix;
use num_complex::Complex64;

use super::gate::{CMatrix, ZERO};
use super::kernel::apply_gate_shifted;
use crate::circuit::Circuit;
use crate::error::{Error, Result};

pub const MAX_UNITARY_QUBITS: usize = 10;

/// Full `2^n × 2^n` unitary of `circuit` (gates applied in order).
pub fn circuit_unitary(circuit: &Circuit) -> Result<CMatrix> {
    let n = circuit.n_qubits();
    if n > MAX_UNITARY_QUBITS {
        return Err(Error::TooManyQubits { n, max: MAX_UNITARY_QUBITS });
    }
    let dim = 1usize << n;
    let mut data = vec![ZERO; dim * dim];
    for i in 0..dim {
        data[i * dim + i] = Complex64::new(1.0, 0.0);
    }
    // row-major: row bits sit above the n column bits
    for g in circuit.gates() {
        apply_gate_shifted(&mut data, g, n, false);
    }
    Ok(DMatrix::from_row_slice(dim, dim, &data))
}

/// `|Tr(U†V)| / dim`: equals one iff `U` and `V` agree up to a global phase.
pub fn phase_insensitive_fidelity(u: &CMatrix, v: &CMatrix) -> f64 {
    let tr: Complex64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
    tr.norm() / u.nrows() as f64
}

/// Largest elementwise difference.
pub fn max_abs_diff(u: &CMatrix, v: &CMatrix) -> f64 {
    u.iter().zip(v.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

/// Largest elementwise deviation of `U†U` from the identity.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    let n = u.nrows();
    max_abs_diff(&(u.adjoint() * u), &CMatrix::identity(n, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simcore::gate::{pauli_x, Gate};

    #[test]
    fn empty_is_identity() {
        let c = Circuit::new(3, vec![]).unwrap();
        assert!(max_abs_diff(&circuit_unitary(&c).unwrap(), &CMatrix::identity(8, 8)) < 1e-15);
    }

    #[test]
    fn single_x() {
        let c = Circuit::new(1, vec![Gate::X(0)]).unwrap();
        assert!(max_abs_diff(&circuit_unitary(&c).unwrap(), &pauli_x()) < 1e-15);
    }

    #[test]
    fn gate_order_is_left_to_right() {
        // X then H on one qubit: U = H·X
        let c = Circuit::new(1, vec![Gate::X(0), Gate::H(0)]).unwrap();
        let expect = Gate::H(0).matrix() * Gate::X(0).matrix();
        assert!(max_abs_diff(&circuit_unitary(&c).unwrap(), &expect) < 1e-15);
    }

    #[test]
    fn too_many_qubits() {
        let c = Circuit::new(11, vec![]).unwrap();
        assert!(matches!(circuit_unitary(&c), Err(Error::TooManyQubits { .. })));
    }
}
