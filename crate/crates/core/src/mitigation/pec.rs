//! Probabilistic error cancellation for depolarizing gate noise.

use rand::Rng;

use crate::circuit::Circuit;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::simcore::{
    derive_seed, rng_from_seed, sample_outcome, DensityMatrix, Gate, PauliString, SimRng, StateVector,
};

/// Quasi-probability decomposition of an inverse channel into Pauli
/// corrections: `N⁻¹(ρ) = Σ cᵢ PᵢρPᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiProbabilityRep {
    pub terms: Vec<(f64, PauliString)>,
    /// `Σ |cᵢ|`, the sampling overhead of this channel.
    pub gamma: f64,
}

impl QuasiProbabilityRep {
    pub fn identity(arity: usize) -> Self {
        Self { terms: vec![(1.0, PauliString::identity(arity))], gamma: 1.0 }
    }

    /// Draws a term index with probability `|cᵢ|/γ`.
    pub fn sample_term<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let weights: Vec<f64> = self.terms.iter().map(|(c, _)| c.abs() / self.gamma).collect();
        sample_outcome(&weights, rng)
    }
}

/// Inverts a Pauli channel `ρ ↦ Σ q_P PρP` given `q` indexed by
/// [`PauliString::index`]. Each Pauli is an eigenoperator of the channel with
/// eigenvalue `f_σ = Σ_P q_P χ(P,σ)` (χ = ±1 for commuting/anticommuting), so the
/// inverse has eigenvalues `1/f_σ` and coefficients from the inverse transform.
pub fn invert_pauli_channel(q: &[f64]) -> Result<Vec<f64>> {
    let len = q.len().trailing_zeros() as usize / 2;
    if q.is_empty() || 1usize << (2 * len) != q.len() {
        return Err(Error::DimensionMismatch { expected: q.len().next_power_of_two(), found: q.len() });
    }
    let paulis: Vec<PauliString> = PauliString::all(len).collect();
    let chi = |a: &PauliString, b: &PauliString| if a.commutes_with(b) { 1.0 } else { -1.0 };
    let mut inv_eig = Vec::with_capacity(q.len());
    for s in &paulis {
        let f: f64 = paulis.iter().zip(q).map(|(p, qp)| qp * chi(p, s)).sum();
        if f.abs() < 1e-12 {
            return Err(Error::NotInvertible(format!("Pauli eigenvalue {f:.3e} for {s}")));
        }
        inv_eig.push(1.0 / f);
    }
    let norm = q.len() as f64;
    Ok(paulis.iter().map(|p| paulis.iter().zip(&inv_eig).map(|(s, l)| chi(p, s) * l).sum::<f64>() / norm).collect())
}

/// Quasi-probability inverse of the `arity`-qubit depolarizing channel
/// `(1−p)ρ + p/(4^k−1) Σ_{P≠I} PρP`.
pub fn pec_invert_depolarizing(p: f64, arity: usize) -> Result<QuasiProbabilityRep> {
    if arity != 1 && arity != 2 {
        return Err(Error::InvalidArity(arity));
    }
    if !(p >= 0.0) {
        return Err(Error::InvalidProbability { what: "depolarizing p", value: p });
    }
    let n_paulis = 1usize << (2 * arity);
    let threshold = (n_paulis - 1) as f64 / n_paulis as f64;
    if p >= threshold {
        return Err(Error::NotInvertible(format!("p = {p} is at or above the fully depolarizing point {threshold}")));
    }
    if p == 0.0 {
        return Ok(QuasiProbabilityRep::identity(arity));
    }
    let mut q = vec![p / (n_paulis - 1) as f64; n_paulis];
    q[0] = 1.0 - p;
    let coeffs = invert_pauli_channel(&q)?;
    let terms: Vec<(f64, PauliString)> = coeffs
        .into_iter()
        .enumerate()
        .filter(|(_, c)| c.abs() > 1e-15)
        .map(|(i, c)| (c, PauliString::from_index(arity, i)))
        .collect();
    let gamma = terms.iter().map(|(c, _)| c.abs()).sum();
    Ok(QuasiProbabilityRep { terms, gamma })
}

/// Inverse representations for the one- and two-qubit gate channels of `noise`.
struct GateInverses {
    one: QuasiProbabilityRep,
    two: QuasiProbabilityRep,
}

impl GateInverses {
    fn new(noise: &NoiseModel) -> Result<Self> {
        if noise.gamma_ad() > 0.0 {
            return Err(Error::NotInvertible("amplitude damping has no Pauli quasi-probability inverse".into()));
        }
        Ok(Self { one: pec_invert_depolarizing(noise.p1(), 1)?, two: pec_invert_depolarizing(noise.p2(), 2)? })
    }

    fn for_gate(&self, gate: &Gate) -> &QuasiProbabilityRep {
        if gate.is_two_qubit() {
            &self.two
        } else {
            &self.one
        }
    }
}

/// `Π γ_gate` over the circuit.
pub fn pec_gamma_total(circuit: &Circuit, noise: &NoiseModel) -> Result<f64> {
    let inv = GateInverses::new(noise)?;
    Ok(circuit.gates().iter().map(|g| inv.for_gate(g).gamma).product())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PecEstimate {
    /// Clipped and renormalized estimate.
    pub distribution: Distribution,
    pub gamma_total: f64,
    /// Signed per-bin estimates before clipping.
    pub raw: Vec<f64>,
}

/// Monte Carlo PEC. Each sample runs one noisy trajectory: after every gate
/// the physical depolarizing error is drawn, then a correction term with
/// probability `|c|/γ`, whose sign multiplies the run's weight. The measured
/// bin (after readout error) accumulates `sign·γ_total`.
pub fn pec_mitigated_distribution(
    circuit: &Circuit,
    noise: &NoiseModel,
    samples: u64,
    seed: u64,
) -> Result<PecEstimate> {
    if samples == 0 {
        return Err(Error::ZeroShots);
    }
    let inv = GateInverses::new(noise)?;
    let gamma_total: f64 = circuit.gates().iter().map(|g| inv.for_gate(g).gamma).product();
    let measured = circuit.measured_qubits();
    let readout: Vec<[[f64; 2]; 2]> = measured.iter().map(|q| noise.readout(*q).as_array()).collect();
    let mut raw = vec![0.0; 1 << measured.len()];
    let start = StateVector::zero(circuit.n_qubits())?;
    for s in 0..samples {
        let mut rng = rng_from_seed(derive_seed(seed, s));
        let mut state = start.clone();
        let mut sign = 1.0;
        for gate in circuit.gates() {
            state.apply(gate)?;
            let qubits = gate.qubits();
            let p = if gate.is_two_qubit() { noise.p2() } else { noise.p1() };
            if p > 0.0 {
                apply_random_depolarizing(&mut state, p, &qubits, &mut rng)?;
                let rep = inv.for_gate(gate);
                let (c, pauli) = &rep.terms[rep.sample_term(&mut rng)];
                for g in pauli.gates(&qubits) {
                    state.apply(&g)?;
                }
                sign *= c.signum();
            }
        }
        let probs = state.probabilities(&measured)?;
        let truth = sample_outcome(probs.probs(), &mut rng);
        let read = read_with_errors(truth, &readout, &mut rng);
        raw[read] += sign;
    }
    raw.iter_mut().for_each(|v| *v *= gamma_total / samples as f64);
    let distribution = Distribution::from_weights(raw.clone())?;
    Ok(PecEstimate { distribution, gamma_total, raw })
}

fn apply_random_depolarizing(state: &mut StateVector, p: f64, qubits: &[usize], rng: &mut SimRng) -> Result<()> {
    if rng.random::<f64>() < p {
        let n = 1usize << (2 * qubits.len());
        let which = PauliString::from_index(qubits.len(), rng.random_range(1..n));
        for g in which.gates(qubits) {
            state.apply(&g)?;
        }
    }
    Ok(())
}

fn read_with_errors(truth: usize, readout: &[[[f64; 2]; 2]], rng: &mut SimRng) -> usize {
    let mut out = 0;
    for (j, a) in readout.iter().enumerate() {
        let bit = (truth >> j) & 1;
        let flipped = rng.random::<f64>() < a[1 - bit][bit];
        out |= ((bit == 1) ^ flipped) as usize * (1 << j);
    }
    out
}

/// Exact PEC: every gate's physical channel is followed by the full signed
/// inverse mixture. Equals the ideal state up to numerical error.
pub fn pec_exact_density(circuit: &Circuit, noise: &NoiseModel) -> Result<DensityMatrix> {
    let inv = GateInverses::new(noise)?;
    let mut rho = DensityMatrix::zero(circuit.n_qubits())?;
    for gate in circuit.gates() {
        rho.apply_gate(gate)?;
        let qubits = gate.qubits();
        let p = if gate.is_two_qubit() { noise.p2() } else { noise.p1() };
        if p > 0.0 {
            rho.depolarize(p, &qubits)?;
            rho.apply_pauli_mixture(&inv.for_gate(gate).terms, &qubits)?;
        }
    }
    Ok(rho)
}
