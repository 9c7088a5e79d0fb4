use super::Circuit;
use crate::error::{Error, Result};

/// Global unitary folding `G (G†G)^((scale−1)/2)` for odd `scale ≥ 1`.
///
/// The ideal unitary is unchanged while every gate (and so every gate-noise
/// channel) appears `scale` times. Folded circuits keep the registers but
/// carry no parameter slots.
pub fn fold_global(circuit: &Circuit, scale: usize) -> Result<Circuit> {
    if scale == 0 || scale.is_multiple_of(2) {
        return Err(Error::InvalidFoldScale(scale));
    }
    if scale == 1 {
        return Ok(circuit.clone());
    }
    let inverse = circuit.dagger();
    let mut gates = Vec::with_capacity(circuit.gates().len() * scale);
    gates.extend_from_slice(circuit.gates());
    for _ in 0..(scale - 1) / 2 {
        gates.extend_from_slice(inverse.gates());
        gates.extend_from_slice(circuit.gates());
    }
    Ok(circuit.replace_gates(gates))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_two_local, AnsatzSpec};
    use crate::simcore::{circuit_unitary, max_abs_diff};

    fn sample() -> Circuit {
        let spec = AnsatzSpec { ry_on_control: false, ..AnsatzSpec::moderate() };
        let params: Vec<f64> = (0..10).map(|i| (i as f64 * 1.3).sin() * 2.0).collect();
        build_two_local(&spec, &params).unwrap()
    }

    #[test]
    fn scale_one_is_identity_map() {
        let c = sample();
        assert_eq!(fold_global(&c, 1).unwrap(), c);
    }

    #[test]
    fn odd_scales_multiply_counts_and_keep_unitary() {
        let c = sample();
        let u = circuit_unitary(&c).unwrap();
        for scale in [3, 5] {
            let f = fold_global(&c, scale).unwrap();
            assert_eq!(f.gate_counts().total, 31 * scale);
            assert_eq!(f.gate_counts().two_qubit, 21 * scale);
            assert!(max_abs_diff(&circuit_unitary(&f).unwrap(), &u) < 1e-10);
        }
    }

    #[test]
    fn even_scale_rejected() {
        assert!(matches!(fold_global(&sample(), 2), Err(Error::InvalidFoldScale(2))));
        assert!(fold_global(&sample(), 0).is_err());
    }
}
