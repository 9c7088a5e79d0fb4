//! Circuit representation over a partitioned register, ansatz builders,
//! global unitary folding and the line-oriented text format.

mod ansatz;
mod fold;
mod text;

pub use ansatz::{build_cqgan, build_two_local, AnsatzSpec, Entanglement};
pub use fold::fold_global;
pub use text::{parse_circuit, write_circuit};

use crate::error::{Error, Result};
use crate::simcore::Gate;

/// Ordered gate list with control/generator registers and the positions of
/// parameterized `Ry` gates.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    control: Vec<usize>,
    generator: Vec<usize>,
    parameter_slots: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateCounts {
    pub total: usize,
    pub two_qubit: usize,
}

/// Structural summary used by `inspect`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerSummary {
    /// Maximal runs of consecutive `Ry` gates.
    pub ry_layers: usize,
    /// Maximal runs of consecutive `CZ` gates.
    pub cz_layers: usize,
    /// ASAP-scheduled circuit depth.
    pub depth: usize,
}

impl Circuit {
    pub fn new(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        for g in &gates {
            g.validate(n_qubits)?;
        }
        Ok(Self { n_qubits, gates, control: vec![], generator: vec![], parameter_slots: vec![] })
    }

    /// Assigns control and generator registers; they must be disjoint and in range.
    pub fn with_registers(mut self, control: Vec<usize>, generator: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; self.n_qubits];
        for &q in control.iter().chain(&generator) {
            if q >= self.n_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, n_qubits: self.n_qubits });
            }
            if std::mem::replace(&mut seen[q], true) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        self.control = control;
        self.generator = generator;
        Ok(self)
    }

    /// Declares which gate positions carry trainable angles; each must be an `Ry`.
    pub fn with_parameter_slots(mut self, slots: Vec<usize>) -> Result<Self> {
        for &s in &slots {
            match self.gates.get(s) {
                Some(Gate::Ry { .. }) => {}
                _ => return Err(Error::InvalidAnsatz(format!("parameter slot {s} is not an Ry gate"))),
            }
        }
        self.parameter_slots = slots;
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn control_register(&self) -> &[usize] {
        &self.control
    }

    pub fn generator_register(&self) -> &[usize] {
        &self.generator
    }

    pub fn parameter_slots(&self) -> &[usize] {
        &self.parameter_slots
    }

    pub fn num_parameters(&self) -> usize {
        self.parameter_slots.len()
    }

    /// Qubits whose outcome is the circuit's result: the generator register,
    /// or every qubit when no generator register is declared.
    pub fn measured_qubits(&self) -> Vec<usize> {
        if self.generator.is_empty() {
            (0..self.n_qubits).collect()
        } else {
            self.generator.clone()
        }
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Current angles read back through the parameter slots.
    pub fn parameters(&self) -> Vec<f64> {
        self.parameter_slots.iter().map(|&s| self.gates[s].angle().expect("slot is Ry")).collect()
    }

    /// Copy with new angles written into the parameter slots.
    pub fn bind(&self, params: &[f64]) -> Result<Circuit> {
        if params.len() != self.parameter_slots.len() {
            return Err(Error::ParameterCount { expected: self.parameter_slots.len(), found: params.len() });
        }
        let mut out = self.clone();
        for (&slot, &theta) in self.parameter_slots.iter().zip(params) {
            if let Gate::Ry { theta: t, .. } = &mut out.gates[slot] {
                *t = theta;
            }
        }
        Ok(out)
    }

    /// Reversed gate order with every gate inverted. Registers are kept;
    /// parameter slots are dropped.
    pub fn dagger(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            control: self.control.clone(),
            generator: self.generator.clone(),
            parameter_slots: vec![],
        }
    }

    pub(crate) fn replace_gates(&self, gates: Vec<Gate>) -> Circuit {
        Circuit { gates, parameter_slots: vec![], ..self.clone() }
    }

    pub fn gate_counts(&self) -> GateCounts {
        gate_counts(self)
    }

    pub fn layer_summary(&self) -> LayerSummary {
        let mut ry_layers = 0;
        let mut cz_layers = 0;
        let mut prev: Option<&'static str> = None;
        for g in &self.gates {
            let m = g.mnemonic();
            if prev != Some(m) {
                match m {
                    "RY" => ry_layers += 1,
                    "CZ" => cz_layers += 1,
                    _ => {}
                }
            }
            prev = Some(m);
        }
        let mut level = vec![0usize; self.n_qubits];
        for g in &self.gates {
            let qs = g.qubits();
            let next = qs.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
            for q in qs {
                level[q] = next;
            }
        }
        LayerSummary { ry_layers, cz_layers, depth: level.into_iter().max().unwrap_or(0) }
    }
}

/// Total gates and two-qubit (CZ) gates.
pub fn gate_counts(circuit: &Circuit) -> GateCounts {
    GateCounts { total: circuit.gates.len(), two_qubit: circuit.gates.iter().filter(|g| g.is_two_qubit()).count() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registers_must_be_disjoint() {
        let c = Circuit::new(4, vec![]).unwrap();
        assert!(c.clone().with_registers(vec![0, 1], vec![1, 2]).is_err());
        assert!(c.clone().with_registers(vec![4], vec![]).is_err());
        assert!(c.with_registers(vec![3], vec![0, 1, 2]).is_ok());
    }

    #[test]
    fn slots_must_point_at_ry() {
        let c = Circuit::new(2, vec![Gate::X(0), Gate::ry(1, 0.1)]).unwrap();
        assert!(c.clone().with_parameter_slots(vec![0]).is_err());
        let c = c.with_parameter_slots(vec![1]).unwrap();
        assert_eq!(c.parameters(), vec![0.1]);
        assert!(matches!(c.bind(&[1.0, 2.0]), Err(Error::ParameterCount { .. })));
    }

    #[test]
    fn empty_counts() {
        let c = Circuit::new(3, vec![]).unwrap();
        assert_eq!(gate_counts(&c), GateCounts { total: 0, two_qubit: 0 });
        assert_eq!(c.layer_summary(), LayerSummary { ry_layers: 0, cz_layers: 0, depth: 0 });
    }

    #[test]
    fn dagger_reverses_and_negates() {
        let c = Circuit::new(2, vec![Gate::ry(0, 0.3), Gate::cz(0, 1), Gate::H(1)]).unwrap();
        assert_eq!(c.dagger().gates(), &[Gate::H(1), Gate::cz(0, 1), Gate::ry(0, -0.3)]);
    }
}
