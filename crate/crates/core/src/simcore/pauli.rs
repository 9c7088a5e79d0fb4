use std::fmt;

use super::gate::{kron_lsb_first, pauli_x, pauli_y, pauli_z, CMatrix, Gate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_index(i: usize) -> Pauli {
        Self::ALL[i & 3]
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn matrix(self) -> CMatrix {
        match self {
            Pauli::I => CMatrix::identity(2, 2),
            Pauli::X => pauli_x(),
            Pauli::Y => pauli_y(),
            Pauli::Z => pauli_z(),
        }
    }

    /// Gate realizing this Pauli on `qubit`, or `None` for the identity.
    pub fn gate(self, qubit: usize) -> Option<Gate> {
        match self {
            Pauli::I => None,
            Pauli::X => Some(Gate::X(qubit)),
            Pauli::Y => Some(Gate::Y(qubit)),
            Pauli::Z => Some(Gate::Z(qubit)),
        }
    }

    pub fn commutes_with(self, other: Pauli) -> bool {
        self == Pauli::I || other == Pauli::I || self == other
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// Tensor product of Paulis; entry `j` acts on the `j`-th qubit of whatever
/// qubit list the string is applied to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString(pub Vec<Pauli>);

impl PauliString {
    pub fn identity(len: usize) -> Self {
        PauliString(vec![Pauli::I; len])
    }

    /// The `index`-th string of length `len`, base-4 with entry 0 least significant.
    pub fn from_index(len: usize, mut index: usize) -> Self {
        let mut v = Vec::with_capacity(len);
        for _ in 0..len {
            v.push(Pauli::from_index(index & 3));
            index >>= 2;
        }
        PauliString(v)
    }

    pub fn index(&self) -> usize {
        self.0.iter().rev().fold(0, |acc, p| (acc << 2) | p.index())
    }

    /// Enumerates all `4^len` strings in index order (identity first).
    pub fn all(len: usize) -> impl Iterator<Item = PauliString> {
        (0..1usize << (2 * len)).map(move |i| PauliString::from_index(len, i))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|p| *p == Pauli::I)
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self.0.iter().zip(&other.0).filter(|(a, b)| !a.commutes_with(**b)).count();
        anti % 2 == 0
    }

    pub fn matrix(&self) -> CMatrix {
        let ops: Vec<CMatrix> = self.0.iter().map(|p| p.matrix()).collect();
        kron_lsb_first(&ops)
    }

    /// Gates realizing the string on `qubits` (identities omitted).
    pub fn gates(&self, qubits: &[usize]) -> Vec<Gate> {
        self.0.iter().zip(qubits).filter_map(|(p, &q)| p.gate(q)).collect()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        for i in 0..16 {
            assert_eq!(PauliString::from_index(2, i).index(), i);
        }
        assert!(PauliString::from_index(3, 0).is_identity());
    }

    #[test]
    fn commutation_matches_matrices() {
        for a in PauliString::all(2) {
            for b in PauliString::all(2) {
                let (ma, mb) = (a.matrix(), b.matrix());
                let comm = &ma * &mb - &mb * &ma;
                assert_eq!(a.commutes_with(&b), comm.norm() < 1e-12, "{a} {b}");
            }
        }
    }
}
