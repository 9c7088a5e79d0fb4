use std::fmt;
use std::str::FromStr;

use super::Circuit;
use crate::error::{Error, Result};
use crate::simcore::Gate;

/// CZ coupling pattern of each entangling layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Entanglement {
    /// Every pair `(i, j)`, `i < j`.
    #[default]
    Full,
    /// Nearest neighbours `(i, i+1)`.
    Linear,
    /// Qubit 0 to every other qubit.
    Star,
}

impl Entanglement {
    pub fn pairs(self, n_qubits: usize) -> Vec<(usize, usize)> {
        match self {
            Entanglement::Full => (0..n_qubits).flat_map(|i| (i + 1..n_qubits).map(move |j| (i, j))).collect(),
            Entanglement::Linear => (1..n_qubits).map(|j| (j - 1, j)).collect(),
            Entanglement::Star => (1..n_qubits).map(|j| (0, j)).collect(),
        }
    }
}

impl FromStr for Entanglement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "full" => Ok(Entanglement::Full),
            "linear" => Ok(Entanglement::Linear),
            "star" => Ok(Entanglement::Star),
            other => Err(Error::InvalidAnsatz(format!("unknown entanglement '{other}'"))),
        }
    }
}

impl fmt::Display for Entanglement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Entanglement::Full => "full",
            Entanglement::Linear => "linear",
            Entanglement::Star => "star",
        })
    }
}

/// Shape of the conditional generator circuit.
///
/// Register layout: generator qubits are `0..n_generator`, control qubits
/// follow at `n_generator..n_generator + n_control`. Control qubit 0 holds
/// the most significant bit of the condition index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnsatzSpec {
    pub n_generator: usize,
    pub n_control: usize,
    /// Number of entangling layers; `reps + 1` rotation layers.
    pub reps: usize,
    pub entanglement: Entanglement,
    /// Also rotate the control qubits.
    pub ry_on_control: bool,
}

impl Default for AnsatzSpec {
    fn default() -> Self {
        Self { n_generator: 5, n_control: 2, reps: 1, entanglement: Entanglement::Full, ry_on_control: true }
    }
}

impl AnsatzSpec {
    /// Two rotation layers around one entangling layer.
    pub fn moderate() -> Self {
        Self { reps: 1, ..Self::default() }
    }

    /// Three rotation layers around two entangling layers.
    pub fn deep() -> Self {
        Self { reps: 2, ..Self::default() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_generator + self.n_control
    }

    pub fn generator_qubits(&self) -> Vec<usize> {
        (0..self.n_generator).collect()
    }

    pub fn control_qubits(&self) -> Vec<usize> {
        (self.n_generator..self.n_qubits()).collect()
    }

    /// Qubits that carry an `Ry` in every rotation layer.
    pub fn rotated_qubits(&self) -> Vec<usize> {
        if self.ry_on_control {
            (0..self.n_qubits()).collect()
        } else {
            self.generator_qubits()
        }
    }

    pub fn num_parameters(&self) -> usize {
        (self.reps + 1) * self.rotated_qubits().len()
    }

    pub fn num_conditions(&self) -> usize {
        1 << self.n_control
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::InvalidAnsatz("reps must be at least 1".into()));
        }
        if self.n_generator == 0 {
            return Err(Error::InvalidAnsatz("generator register is empty".into()));
        }
        crate::simcore::StateVector::zero(self.n_qubits()).map(|_| ())
    }
}

/// Alternating `Ry` and `CZ` layers, ending with an `Ry` layer. Parameter
/// slots enumerate the `Ry` gates layer by layer, qubit by qubit.
pub fn build_two_local(spec: &AnsatzSpec, params: &[f64]) -> Result<Circuit> {
    spec.validate()?;
    if params.len() != spec.num_parameters() {
        return Err(Error::ParameterCount { expected: spec.num_parameters(), found: params.len() });
    }
    let n = spec.n_qubits();
    let rotated = spec.rotated_qubits();
    let pairs = spec.entanglement.pairs(n);
    let mut gates = Vec::with_capacity(params.len() + spec.reps * pairs.len());
    let mut slots = Vec::with_capacity(params.len());
    let mut angles = params.iter();
    for layer in 0..=spec.reps {
        for &q in &rotated {
            slots.push(gates.len());
            gates.push(Gate::ry(q, *angles.next().expect("length checked")));
        }
        if layer < spec.reps {
            gates.extend(pairs.iter().map(|&(a, b)| Gate::cz(a, b)));
        }
    }
    Circuit::new(n, gates)?.with_registers(spec.control_qubits(), spec.generator_qubits())?.with_parameter_slots(slots)
}

/// Basis-encodes condition `t` into the control register (X gates, control
/// qubit 0 most significant) and appends the two-local generator.
pub fn build_cqgan(t: usize, spec: &AnsatzSpec, params: &[f64]) -> Result<Circuit> {
    if t >= spec.num_conditions() {
        return Err(Error::ConditionOutOfRange { t, max: spec.num_conditions() });
    }
    let body = build_two_local(spec, params)?;
    let control = spec.control_qubits();
    let k = control.len();
    let prefix: Vec<Gate> =
        control.iter().enumerate().filter(|(i, _)| (t >> (k - 1 - i)) & 1 == 1).map(|(_, &q)| Gate::X(q)).collect();
    let shift = prefix.len();
    let slots = body.parameter_slots().iter().map(|s| s + shift).collect();
    let mut gates = prefix;
    gates.extend_from_slice(body.gates());
    Circuit::new(spec.n_qubits(), gates)?.with_registers(control, spec.generator_qubits())?.with_parameter_slots(slots)
}
