//! Pauli twirling of CZ gates.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::simcore::{rng_from_seed, CMatrix, DensityMatrix, Gate, PauliString};

/// `CZ·P·CZ = sign·conjugated` for a two-qubit Pauli `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct CzConjugation {
    pub pauli: PauliString,
    pub conjugated: PauliString,
    pub sign: f64,
}

fn cz_matrix() -> CMatrix {
    let mut m = CMatrix::identity(4, 4);
    m[(3, 3)] = Complex64::new(-1.0, 0.0);
    m
}

/// The 16-entry conjugation table, indexed by [`PauliString::index`].
/// Computed once from the 4×4 matrices.
pub fn cz_conjugation_table() -> &'static [CzConjugation] {
    static TABLE: OnceLock<Vec<CzConjugation>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let cz = cz_matrix();
        PauliString::all(2)
            .map(|p| {
                let m = &cz * p.matrix() * &cz;
                let (conjugated, sign) = PauliString::all(2)
                    .find_map(|q| {
                        let overlap = (q.matrix().adjoint() * &m).trace() / 4.0;
                        ((overlap.norm() - 1.0).abs() < 1e-12).then_some((q, overlap.re))
                    })
                    .expect("CZ maps Paulis to Paulis");
                CzConjugation { pauli: p, conjugated, sign }
            })
            .collect()
    })
}

/// Replaces the `k`-th CZ by `P'` gates, the CZ, then `P` gates, where
/// `P = choose(k)` and `P' = CZ·P·CZ` up to sign. Identity factors emit no gates.
pub fn pauli_twirl_with<F>(circuit: &Circuit, mut choose: F) -> Result<Circuit>
where
    F: FnMut(usize) -> PauliString,
{
    let table = cz_conjugation_table();
    let mut gates = Vec::with_capacity(circuit.gates().len());
    let mut k = 0;
    for gate in circuit.gates() {
        match *gate {
            Gate::Cz(a, b) => {
                let p = choose(k);
                if p.len() != 2 {
                    return Err(Error::DimensionMismatch { expected: 2, found: p.len() });
                }
                k += 1;
                let entry = &table[p.index()];
                gates.extend(entry.conjugated.gates(&[a, b]));
                gates.push(*gate);
                gates.extend(p.gates(&[a, b]));
            }
            _ => gates.push(*gate),
        }
    }
    Ok(circuit.replace_gates(gates))
}

/// Twirls every CZ with a Pauli pair drawn uniformly from the 16.
pub fn pauli_twirl(circuit: &Circuit, seed: u64) -> Circuit {
    let mut rng = rng_from_seed(seed);
    pauli_twirl_with(circuit, |_| PauliString::from_index(2, rng.random_range(0..16)))
        .expect("generated strings have length 2")
}

/// Pauli transfer matrix `R_ij = Tr(P_i Λ(P_j)) / 2^n` of a linear map on
/// `n_qubits`, Paulis in [`PauliString::index`] order.
pub fn pauli_transfer_matrix<F>(n_qubits: usize, channel: F) -> Result<DMatrix<f64>>
where
    F: Fn(&mut DensityMatrix) -> Result<()>,
{
    let paulis: Vec<PauliString> = PauliString::all(n_qubits).collect();
    let mats: Vec<CMatrix> = paulis.iter().map(PauliString::matrix).collect();
    let dim = (1usize << n_qubits) as f64;
    let mut r = DMatrix::zeros(mats.len(), mats.len());
    for (j, pj) in mats.iter().enumerate() {
        let mut rho = DensityMatrix::from_operator(pj)?;
        channel(&mut rho)?;
        let out = rho.to_matrix();
        for (i, pi) in mats.iter().enumerate() {
            r[(i, j)] = (pi * &out).trace().re / dim;
        }
    }
    Ok(r)
}

/// Transfer matrix of the effective noise `Λ` of a twirled noisy CZ, defined by
/// `avg_P P·N(CZ·P'·ρ·P'·CZ)·P = Λ(CZ·ρ·CZ)`, with `noise` the channel `N` applied
/// after the CZ on qubits 0 and 1.
pub fn twirled_cz_noise_ptm<F>(noise: F) -> Result<DMatrix<f64>>
where
    F: Fn(&mut DensityMatrix) -> Result<()>,
{
    let table = cz_conjugation_table();
    let cz = Gate::cz(0, 1);
    pauli_transfer_matrix(2, |rho| {
        rho.apply_gate(&cz)?;
        let input = rho.clone();
        let mut acc: Option<DensityMatrix> = None;
        for entry in table {
            let mut term = input.clone();
            for g in entry.conjugated.gates(&[0, 1]) {
                term.apply_gate(&g)?;
            }
            term.apply_gate(&cz)?;
            noise(&mut term)?;
            for g in entry.pauli.gates(&[0, 1]) {
                term.apply_gate(&g)?;
            }
            acc = Some(match acc {
                None => term,
                Some(a) => a.add_scaled(&term, 1.0),
            });
        }
        *rho = acc.expect("16 terms").scaled(1.0 / table.len() as f64);
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::amplitude_damping_kraus;
    use crate::simcore::{circuit_unitary, phase_insensitive_fidelity, Pauli};

    #[test]
    fn table_is_a_signed_permutation() {
        let t = cz_conjugation_table();
        assert_eq!(t.len(), 16);
        let mut images: Vec<usize> = t.iter().map(|e| e.conjugated.index()).collect();
        images.sort_unstable();
        assert_eq!(images, (0..16).collect::<Vec<_>>());
        assert!(t.iter().all(|e| e.sign.abs() == 1.0));
        // X⊗I ↦ X⊗Z, Y⊗Y ↦ X⊗X
        assert_eq!(t[PauliString(vec![Pauli::X, Pauli::I]).index()].conjugated, PauliString(vec![Pauli::X, Pauli::Z]));
        let yy = &t[PauliString(vec![Pauli::Y, Pauli::Y]).index()];
        assert_eq!(yy.conjugated, PauliString(vec![Pauli::X, Pauli::X]));
    }

    #[test]
    fn identity_draw_leaves_circuit_unchanged() {
        let c = Circuit::new(3, vec![Gate::ry(0, 0.2), Gate::cz(0, 2), Gate::cz(1, 2)]).unwrap();
        let t = pauli_twirl_with(&c, |_| PauliString::identity(2)).unwrap();
        assert_eq!(t.gates(), c.gates());
    }

    #[test]
    fn x_on_first_qubit() {
        let c = Circuit::new(2, vec![Gate::cz(0, 1)]).unwrap();
        let t = pauli_twirl_with(&c, |_| PauliString(vec![Pauli::X, Pauli::I])).unwrap();
        assert_eq!(t.gates(), &[Gate::X(0), Gate::Z(1), Gate::cz(0, 1), Gate::X(0)]);
        let f = phase_insensitive_fidelity(&circuit_unitary(&c).unwrap(), &circuit_unitary(&t).unwrap());
        assert!((f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn every_pair_preserves_the_unitary() {
        let c = Circuit::new(3, vec![Gate::ry(0, 0.4), Gate::cz(0, 1), Gate::ry(2, -0.3), Gate::cz(2, 1)]).unwrap();
        let u = circuit_unitary(&c).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                let t = pauli_twirl_with(&c, |k| PauliString::from_index(2, if k == 0 { i } else { j })).unwrap();
                let f = phase_insensitive_fidelity(&u, &circuit_unitary(&t).unwrap());
                assert!((f - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn seeded_twirl_is_deterministic() {
        let c = Circuit::new(2, vec![Gate::cz(0, 1), Gate::ry(0, 1.0), Gate::cz(0, 1)]).unwrap();
        assert_eq!(pauli_twirl(&c, 4), pauli_twirl(&c, 4));
    }

    fn ad_noise(rho: &mut DensityMatrix) -> Result<()> {
        let k = amplitude_damping_kraus(0.1)?;
        rho.apply_kraus(&k, &[0])?;
        rho.apply_kraus(&k, &[1])
    }

    fn max_off_diagonal(m: &DMatrix<f64>) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if i != j {
                    worst = worst.max(m[(i, j)].abs());
                }
            }
        }
        worst
    }

    #[test]
    fn twirling_diagonalizes_amplitude_damping() {
        let raw = pauli_transfer_matrix(2, ad_noise).unwrap();
        assert!(max_off_diagonal(&raw) > 0.05);
        let twirled = twirled_cz_noise_ptm(ad_noise).unwrap();
        assert!(max_off_diagonal(&twirled) < 1e-9);
        for i in 0..16 {
            assert!((twirled[(i, i)] - raw[(i, i)]).abs() < 1e-12);
        }
    }
}
