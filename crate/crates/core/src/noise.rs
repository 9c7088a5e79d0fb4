//! Parameterized noise: depolarizing and amplitude-damping channels attached
//! after each gate, plus per-qubit readout assignment errors.
//!
//! Assignment matrices are column-stochastic: `A[i][j] = P(read i | true j)`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::simcore::{CMatrix, PauliString};

/// Per-qubit readout error, `m[i][j] = P(read i | true j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssignmentMatrix([[f64; 2]; 2]);

impl AssignmentMatrix {
    pub fn new(m: [[f64; 2]; 2]) -> Result<Self> {
        for row in &m {
            for &v in row {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidAssignment(format!("entry {v} outside [0,1]")));
                }
            }
        }
        for (j, col) in [m[0][0] + m[1][0], m[0][1] + m[1][1]].into_iter().enumerate() {
            if (col - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidAssignment(format!("column {j} sums to {col}")));
            }
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self([[1.0, 0.0], [0.0, 1.0]])
    }

    /// Symmetric bit flip with probability `flip` in both directions.
    pub fn symmetric(flip: f64) -> Result<Self> {
        Self::new([[1.0 - flip, flip], [flip, 1.0 - flip]])
    }

    pub fn get(&self, read: usize, truth: usize) -> f64 {
        self.0[read][truth]
    }

    pub fn as_array(&self) -> [[f64; 2]; 2] {
        self.0
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[self.0[0][0], self.0[0][1], self.0[1][0], self.0[1][1]])
    }
}

/// Gate and readout noise for one device model.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    p1: f64,
    p2: f64,
    gamma_ad: f64,
    default_readout: AssignmentMatrix,
    readout_overrides: BTreeMap<usize, AssignmentMatrix>,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self::ideal()
    }
}

impl NoiseModel {
    /// No gate noise, perfect readout.
    pub fn ideal() -> Self {
        Self {
            p1: 0.0,
            p2: 0.0,
            gamma_ad: 0.0,
            default_readout: AssignmentMatrix::identity(),
            readout_overrides: BTreeMap::new(),
        }
    }

    /// Benchmark reference: p1 = 0.001, p2 = 0.01, symmetric 2% readout flips.
    pub fn reference() -> Self {
        Self::builder().p1(0.001).p2(0.01).readout_flip(0.02).build().expect("valid constants")
    }

    pub fn builder() -> NoiseModelBuilder {
        NoiseModelBuilder::default()
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn gamma_ad(&self) -> f64 {
        self.gamma_ad
    }

    /// Assignment matrix of qubits without an override.
    pub fn default_readout(&self) -> AssignmentMatrix {
        self.default_readout
    }

    pub fn readout(&self, qubit: usize) -> AssignmentMatrix {
        self.readout_overrides.get(&qubit).copied().unwrap_or(self.default_readout)
    }

    pub fn has_gate_noise(&self) -> bool {
        self.p1 > 0.0 || self.p2 > 0.0 || self.gamma_ad > 0.0
    }

    pub fn has_readout_error(&self) -> bool {
        !self.default_readout.is_identity() || self.readout_overrides.values().any(|a| !a.is_identity())
    }

    /// Same gate noise with perfect readout.
    pub fn without_readout(&self) -> Self {
        Self { default_readout: AssignmentMatrix::identity(), readout_overrides: BTreeMap::new(), ..self.clone() }
    }

    /// Same readout error with noiseless gates.
    pub fn readout_only(&self) -> Self {
        Self { p1: 0.0, p2: 0.0, gamma_ad: 0.0, ..self.clone() }
    }
}

#[derive(Debug, Clone)]
pub struct NoiseModelBuilder {
    p1: f64,
    p2: f64,
    gamma_ad: f64,
    default_readout: Option<AssignmentMatrix>,
    readout_flip: f64,
    overrides: BTreeMap<usize, AssignmentMatrix>,
}

impl Default for NoiseModelBuilder {
    fn default() -> Self {
        Self { p1: 0.0, p2: 0.0, gamma_ad: 0.0, default_readout: None, readout_flip: 0.0, overrides: BTreeMap::new() }
    }
}

impl NoiseModelBuilder {
    pub fn p1(mut self, p: f64) -> Self {
        self.p1 = p;
        self
    }

    pub fn p2(mut self, p: f64) -> Self {
        self.p2 = p;
        self
    }

    pub fn gamma_ad(mut self, g: f64) -> Self {
        self.gamma_ad = g;
        self
    }

    /// Symmetric flip probability applied to every qubit without an override.
    pub fn readout_flip(mut self, flip: f64) -> Self {
        self.readout_flip = flip;
        self
    }

    pub fn default_readout(mut self, a: AssignmentMatrix) -> Self {
        self.default_readout = Some(a);
        self
    }

    pub fn readout(mut self, qubit: usize, a: AssignmentMatrix) -> Self {
        self.overrides.insert(qubit, a);
        self
    }

    pub fn build(self) -> Result<NoiseModel> {
        for (what, v) in
            [("p1", self.p1), ("p2", self.p2), ("gamma_ad", self.gamma_ad), ("readout_flip", self.readout_flip)]
        {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidProbability { what, value: v });
            }
        }
        let default_readout = match self.default_readout {
            Some(a) => a,
            None => AssignmentMatrix::symmetric(self.readout_flip)?,
        };
        Ok(NoiseModel {
            p1: self.p1,
            p2: self.p2,
            gamma_ad: self.gamma_ad,
            default_readout,
            readout_overrides: self.overrides,
        })
    }
}

/// Kraus operators of the depolarizing channel
/// `(1−p)ρ + p/(4^k−1) Σ_{P≠I} PρP` for `arity` k ∈ {1, 2}.
pub fn depolarizing_kraus(p: f64, arity: usize) -> Result<Vec<CMatrix>> {
    if arity != 1 && arity != 2 {
        return Err(Error::InvalidArity(arity));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability { what: "depolarizing p", value: p });
    }
    let others = ((1usize << (2 * arity)) - 1) as f64;
    Ok(PauliString::all(arity)
        .map(|ps| {
            let w = if ps.is_identity() { (1.0 - p).sqrt() } else { (p / others).sqrt() };
            ps.matrix() * Complex64::new(w, 0.0)
        })
        .collect())
}

/// `K0 = [[1,0],[0,√(1−γ)]]`, `K1 = [[0,√γ],[0,0]]`.
pub fn amplitude_damping_kraus(gamma: f64) -> Result<Vec<CMatrix>> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidProbability { what: "amplitude damping gamma", value: gamma });
    }
    let z = Complex64::new(0.0, 0.0);
    let k0 = CMatrix::from_row_slice(2, 2, &[1.0.into(), z, z, (1.0 - gamma).sqrt().into()]);
    let k1 = CMatrix::from_row_slice(2, 2, &[z, gamma.sqrt().into(), z, z]);
    Ok(vec![k0, k1])
}

/// `(A_{q_{k−1}} ⊗ … ⊗ A_{q_0}) · dist`, with bit `j` of the outcome read
/// through the assignment matrix of `qubits[j]`.
pub fn apply_readout_error(dist: &Distribution, model: &NoiseModel, qubits: &[usize]) -> Result<Distribution> {
    let expected = 1usize << qubits.len();
    if dist.len() != expected {
        return Err(Error::DimensionMismatch { expected, found: dist.len() });
    }
    let mut v = dist.probs().to_vec();
    for (j, &q) in qubits.iter().enumerate() {
        let a = model.readout(q);
        if a.is_identity() {
            continue;
        }
        let bit = 1usize << j;
        for i in (0..v.len()).filter(|i| i & bit == 0) {
            let (t0, t1) = (v[i], v[i | bit]);
            v[i] = a.get(0, 0) * t0 + a.get(0, 1) * t1;
            v[i | bit] = a.get(1, 0) * t0 + a.get(1, 1) * t1;
        }
    }
    Distribution::with_tolerance(v, 1e-9)
}

/// Full `2^k × 2^k` assignment matrix for `qubits` under `model`.
pub fn assignment_tensor(model: &NoiseModel, qubits: &[usize]) -> DMatrix<f64> {
    kron_assignments(&qubits.iter().map(|q| model.readout(*q)).collect::<Vec<_>>())
}

/// Kronecker product with `mats[0]` on the least-significant outcome bit.
pub fn kron_assignments(mats: &[AssignmentMatrix]) -> DMatrix<f64> {
    let mut acc = DMatrix::from_element(1, 1, 1.0);
    for a in mats {
        acc = a.to_matrix().kronecker(&acc);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simcore::{apply_kraus, DensityMatrix};

    fn completeness(kraus: &[CMatrix]) -> f64 {
        let n = kraus[0].nrows();
        let mut sum = CMatrix::zeros(n, n);
        for k in kraus {
            sum += k.adjoint() * k;
        }
        (sum - CMatrix::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn kraus_sets_complete() {
        for p in [0.0, 0.01, 0.3, 0.75, 1.0] {
            assert!(completeness(&depolarizing_kraus(p, 1).unwrap()) < 1e-12);
            assert!(completeness(&depolarizing_kraus(p, 2).unwrap()) < 1e-12);
            assert!(completeness(&amplitude_damping_kraus(p).unwrap()) < 1e-12);
        }
        assert_eq!(depolarizing_kraus(0.1, 2).unwrap().len(), 16);
        assert!(matches!(depolarizing_kraus(0.1, 3), Err(Error::InvalidArity(3))));
        assert!(amplitude_damping_kraus(1.5).is_err());
    }

    #[test]
    fn zero_p_is_identity_only() {
        let k = depolarizing_kraus(0.0, 1).unwrap();
        assert!((k[0].clone() - CMatrix::identity(2, 2)).norm() < 1e-15);
        assert!(k[1..].iter().all(|m| m.norm() == 0.0));
    }

    #[test]
    fn two_qubit_fully_depolarizing_point() {
        let mut rho = DensityMatrix::zero(2).unwrap();
        rho.apply_gate(&crate::simcore::Gate::ry(0, 0.4)).unwrap();
        rho.apply_gate(&crate::simcore::Gate::H(1)).unwrap();
        let out = apply_kraus(&rho, &depolarizing_kraus(15.0 / 16.0, 2).unwrap(), &[0, 1]).unwrap();
        assert!(out.max_abs_diff(&DensityMatrix::maximally_mixed(2).unwrap()) < 1e-12);
    }

    #[test]
    fn depolarizing_is_unital() {
        for arity in [1, 2] {
            let mixed = DensityMatrix::maximally_mixed(arity).unwrap();
            let qubits: Vec<usize> = (0..arity).collect();
            let out = apply_kraus(&mixed, &depolarizing_kraus(0.37, arity).unwrap(), &qubits).unwrap();
            assert!(out.max_abs_diff(&mixed) < 1e-12);
        }
    }

    #[test]
    fn amplitude_damping_partial_decay() {
        let mut one = DensityMatrix::zero(1).unwrap();
        one.apply_gate(&crate::simcore::Gate::X(0)).unwrap();
        let out = apply_kraus(&one, &amplitude_damping_kraus(0.2).unwrap(), &[0]).unwrap();
        assert!((out.diagonal()[0] - 0.2).abs() < 1e-15 && (out.diagonal()[1] - 0.8).abs() < 1e-15);
        let out = apply_kraus(&one, &amplitude_damping_kraus(0.0).unwrap(), &[0]).unwrap();
        assert_eq!(out, one);
        let out = apply_kraus(&one, &amplitude_damping_kraus(1.0).unwrap(), &[0]).unwrap();
        assert_eq!(out.diagonal(), vec![1.0, 0.0]);
    }

    #[test]
    fn readout_examples() {
        let a = AssignmentMatrix::new([[0.9, 0.1], [0.1, 0.9]]).unwrap();
        let model = NoiseModel::builder().default_readout(a).build().unwrap();
        let out = apply_readout_error(&Distribution::point_mass(2, 0), &model, &[0]).unwrap();
        assert!((out.probs()[0] - 0.9).abs() < 1e-15 && (out.probs()[1] - 0.1).abs() < 1e-15);
        let out = apply_readout_error(&Distribution::point_mass(4, 0), &model, &[0, 1]).unwrap();
        for (got, want) in out.probs().iter().zip([0.81, 0.09, 0.09, 0.01]) {
            assert!((got - want).abs() < 1e-12);
        }
        let d = Distribution::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(apply_readout_error(&d, &NoiseModel::ideal(), &[0, 1]).unwrap(), d);
        assert!(matches!(apply_readout_error(&d, &model, &[0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn readout_matches_tensor() {
        let model = NoiseModel::builder()
            .readout_flip(0.03)
            .readout(1, AssignmentMatrix::new([[0.95, 0.1], [0.05, 0.9]]).unwrap())
            .build()
            .unwrap();
        let d = Distribution::new(vec![0.05, 0.15, 0.3, 0.1, 0.1, 0.05, 0.2, 0.05]).unwrap();
        let qubits = [2, 1, 0];
        let fast = apply_readout_error(&d, &model, &qubits).unwrap();
        let full = assignment_tensor(&model, &qubits) * nalgebra::DVector::from_column_slice(d.probs());
        for (a, b) in fast.probs().iter().zip(full.iter()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn invalid_models() {
        assert!(AssignmentMatrix::new([[0.9, 0.2], [0.1, 0.9]]).is_err());
        assert!(NoiseModel::builder().p1(-0.1).build().is_err());
        assert!(NoiseModel::builder().p2(1.1).build().is_err());
        let r = NoiseModel::reference();
        assert_eq!((r.p1(), r.p2(), r.gamma_ad()), (0.001, 0.01, 0.0));
        assert_eq!(r.readout(4).as_array(), [[0.98, 0.02], [0.02, 0.98]]);
    }
}
