//! Line-oriented circuit format:
//!
//! ```text
//! QUBITS 7 CONTROL 5,6 GENERATOR 0,1,2,3,4
//! RY 0 1.2500000000000000e-1
//! CZ 0 1
//! X 5
//! ```
//!
//! An empty register is written as `-`. Blank lines and `#` comments are
//! ignored; an empty file is a zero-qubit circuit. Every `RY` line becomes a
//! parameter slot when read back.

use std::fmt::Write as _;

use super::Circuit;
use crate::error::{Error, Result};
use crate::simcore::Gate;

pub fn write_circuit(circuit: &Circuit) -> String {
    let mut out = format!(
        "QUBITS {} CONTROL {} GENERATOR {}\n",
        circuit.n_qubits(),
        join(circuit.control_register()),
        join(circuit.generator_register())
    );
    for g in circuit.gates() {
        writeln!(out, "{g}").expect("writing to String");
    }
    out
}

fn join(qubits: &[usize]) -> String {
    if qubits.is_empty() {
        "-".to_string()
    } else {
        qubits.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",")
    }
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let Some((line_no, header)) = lines.next() else {
        return Circuit::new(0, vec![]);
    };
    let err = |line: usize, message: String| Error::Parse { line, message };
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (n_qubits, control, generator) = match fields.as_slice() {
        ["QUBITS", n, "CONTROL", c, "GENERATOR", g] => (
            n.parse::<usize>().map_err(|e| err(line_no, format!("qubit count: {e}")))?,
            parse_list(c).map_err(|m| err(line_no, m))?,
            parse_list(g).map_err(|m| err(line_no, m))?,
        ),
        _ => return Err(err(line_no, "expected 'QUBITS n CONTROL a,b GENERATOR c,d,...'".into())),
    };
    let mut gates = Vec::new();
    let mut slots = Vec::new();
    for (line, l) in lines {
        let f: Vec<&str> = l.split_whitespace().collect();
        let q = |s: &str| s.parse::<usize>().map_err(|e| err(line, format!("qubit index: {e}")));
        let gate = match f.as_slice() {
            ["RY", a, theta] => {
                let theta = theta.parse::<f64>().map_err(|e| err(line, format!("angle: {e}")))?;
                slots.push(gates.len());
                Gate::ry(q(a)?, theta)
            }
            ["CZ", a, b] => Gate::Cz(q(a)?, q(b)?),
            ["X", a] => Gate::X(q(a)?),
            ["Y", a] => Gate::Y(q(a)?),
            ["Z", a] => Gate::Z(q(a)?),
            ["H", a] => Gate::H(q(a)?),
            _ => return Err(err(line, format!("unrecognized gate line '{l}'"))),
        };
        gate.validate(n_qubits).map_err(|e| err(line, e.to_string()))?;
        gates.push(gate);
    }
    Circuit::new(n_qubits, gates)?.with_registers(control, generator)?.with_parameter_slots(slots)
}

fn parse_list(s: &str) -> std::result::Result<Vec<usize>, String> {
    if s == "-" {
        return Ok(vec![]);
    }
    s.split(',').map(|x| x.trim().parse::<usize>().map_err(|e| format!("register list '{s}': {e}"))).collect()
}
