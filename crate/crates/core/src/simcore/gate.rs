use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix used for gate unitaries, Kraus operators and
/// whole-circuit unitaries.
pub type CMatrix = DMatrix<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// A gate of the supported set, carrying its target qubits.
///
/// `Ry(θ)` uses the real convention `[[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]`.
/// `Cz` is symmetric in its two qubits, and `Cz(a, b) == Cz(b, a)`.
#[derive(Debug, Clone, Copy)]
pub enum Gate {
    Ry { qubit: usize, theta: f64 },
    X(usize),
    Y(usize),
    Z(usize),
    H(usize),
    Cz(usize, usize),
}

impl Gate {
    pub fn ry(qubit: usize, theta: f64) -> Self {
        Gate::Ry { qubit, theta }
    }

    pub fn cz(a: usize, b: usize) -> Self {
        Gate::Cz(a.min(b), a.max(b))
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Ry { qubit, .. } | Gate::X(qubit) | Gate::Y(qubit) | Gate::Z(qubit) | Gate::H(qubit) => {
                vec![qubit]
            }
            Gate::Cz(a, b) => vec![a, b],
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Gate::Cz(..) => 2,
            _ => 1,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.arity() == 2
    }

    /// Checks that targets are distinct and lie inside an `n_qubits` register.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let qubits = self.qubits();
        for &q in &qubits {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
            }
        }
        if let Gate::Cz(a, b) = *self {
            if a == b {
                return Err(Error::DuplicateQubit(a));
            }
        }
        Ok(())
    }

    /// The inverse gate. Every gate except `Ry` is self-inverse.
    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::Ry { qubit, theta } => Gate::Ry { qubit, theta: -theta },
            g => g,
        }
    }

    /// Unitary on the gate's local space. For `Cz` the local index is
    /// `bit(first) | bit(second) << 1`, which is irrelevant since CZ is symmetric.
    pub fn matrix(&self) -> CMatrix {
        match *self {
            Gate::Ry { theta, .. } => ry_matrix(theta),
            Gate::X(_) => pauli_x(),
            Gate::Y(_) => pauli_y(),
            Gate::Z(_) => pauli_z(),
            Gate::H(_) => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                CMatrix::from_row_slice(2, 2, &[h, h, h, -h])
            }
            Gate::Cz(..) => CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE, ONE, ONE, -ONE])),
        }
    }

    /// Returns the rotation angle for `Ry`.
    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Ry { theta, .. } => Some(theta),
            _ => None,
        }
    }

    pub fn mnemonic(&self) -> &'static str {
        match self {
            Gate::Ry { .. } => "RY",
            Gate::X(_) => "X",
            Gate::Y(_) => "Y",
            Gate::Z(_) => "Z",
            Gate::H(_) => "H",
            Gate::Cz(..) => "CZ",
        }
    }
}

impl PartialEq for Gate {
    fn eq(&self, other: &Self) -> bool {
        match (*self, *other) {
            (Gate::Ry { qubit: a, theta: x }, Gate::Ry { qubit: b, theta: y }) => a == b && x == y,
            (Gate::X(a), Gate::X(b))
            | (Gate::Y(a), Gate::Y(b))
            | (Gate::Z(a), Gate::Z(b))
            | (Gate::H(a), Gate::H(b)) => a == b,
            (Gate::Cz(a, b), Gate::Cz(c, d)) => (a == c && b == d) || (a == d && b == c),
            _ => false,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Ry { qubit, theta } => write!(f, "RY {qubit} {theta:.16e}"),
            Gate::Cz(a, b) => write!(f, "CZ {a} {b}"),
            Gate::X(q) | Gate::Y(q) | Gate::Z(q) | Gate::H(q) => write!(f, "{} {q}", self.mnemonic()),
        }
    }
}

pub fn ry_matrix(theta: f64) -> CMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    CMatrix::from_row_slice(2, 2, &[c.into(), (-s).into(), s.into(), c.into()])
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// Kronecker product of per-qubit operators where `ops[0]` acts on the
/// least-significant bit of the local index.
pub fn kron_lsb_first(ops: &[CMatrix]) -> CMatrix {
    let mut acc = CMatrix::identity(1, 1);
    for op in ops {
        acc = op.kronecker(&acc);
    }
    acc
}
