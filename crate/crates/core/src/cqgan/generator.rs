use std::f64::consts::FRAC_PI_2;

use crate::analysis::kl_divergence;
use crate::circuit::{build_cqgan, AnsatzSpec};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::noise::{apply_readout_error, NoiseModel};
use crate::simcore::{evolve_density, DensityMatrix, StateVector};

/// Output distribution of the generator register for condition `t`.
///
/// Without `noise` the state vector is simulated; with `noise` the density
/// matrix is evolved and the generator marginal is passed through readout error.
pub fn generator_distribution(
    spec: &AnsatzSpec,
    params: &[f64],
    t: usize,
    noise: Option<&NoiseModel>,
) -> Result<Distribution> {
    let circuit = build_cqgan(t, spec, params)?;
    let measured = circuit.generator_register().to_vec();
    match noise {
        None => {
            let mut state = StateVector::zero(circuit.n_qubits())?;
            state.run(&circuit)?;
            state.probabilities(&measured)
        }
        Some(model) => {
            let rho = evolve_density(&DensityMatrix::zero(circuit.n_qubits())?, &circuit, model)?;
            apply_readout_error(&rho.probabilities(&measured)?, model, &measured)
        }
    }
}

/// `Σ_t KL(target_t ‖ generator_t)` over all conditions, noiseless.
pub fn loss(spec: &AnsatzSpec, params: &[f64], targets: &[Distribution], eps: f64) -> Result<f64> {
    check_targets(spec, targets)?;
    let mut total = 0.0;
    for (t, target) in targets.iter().enumerate() {
        total += kl_divergence(target, &generator_distribution(spec, params, t, None)?, eps)?;
    }
    Ok(total)
}

fn check_targets(spec: &AnsatzSpec, targets: &[Distribution]) -> Result<()> {
    if targets.len() != spec.num_conditions() {
        return Err(Error::DimensionMismatch { expected: spec.num_conditions(), found: targets.len() });
    }
    let bins = 1usize << spec.n_generator;
    if let Some(t) = targets.iter().find(|t| t.len() != bins) {
        return Err(Error::DimensionMismatch { expected: bins, found: t.len() });
    }
    Ok(())
}

/// `∂KL(P' ‖ Q')/∂qₖ` for the floored-and-renormalized KL, as a function of
/// the raw generator probabilities `q`.
fn kl_grad_wrt_q(target: &Distribution, q: &[f64], eps: f64) -> Vec<f64> {
    let p: Vec<f64> = target.probs().iter().map(|x| x.max(eps)).collect();
    let ps: f64 = p.iter().sum();
    let f: Vec<f64> = q.iter().map(|x| x.max(eps)).collect();
    let s: f64 = f.iter().sum();
    q.iter().zip(&f).zip(&p).map(|((&qk, &fk), &pk)| if qk > eps { -(pk / ps) / fk + 1.0 / s } else { 0.0 }).collect()
}

/// Exact gradient of [`loss`] by the ±π/2 parameter-shift rule on every bin
/// probability, chained through the KL derivative.
pub fn gradient_parameter_shift(
    spec: &AnsatzSpec,
    params: &[f64],
    targets: &[Distribution],
    eps: f64,
    noise: Option<&NoiseModel>,
) -> Result<Vec<f64>> {
    if noise.is_some() {
        return Err(Error::NoisyGradient);
    }
    check_targets(spec, targets)?;
    if params.len() != spec.num_parameters() {
        return Err(Error::ParameterCount { expected: spec.num_parameters(), found: params.len() });
    }
    let mut grad = vec![0.0; params.len()];
    let mut shifted = params.to_vec();
    for (t, target) in targets.iter().enumerate() {
        let q = generator_distribution(spec, params, t, None)?;
        let dq = kl_grad_wrt_q(target, q.probs(), eps);
        for j in 0..params.len() {
            shifted[j] = params[j] + FRAC_PI_2;
            let plus = generator_distribution(spec, &shifted, t, None)?;
            shifted[j] = params[j] - FRAC_PI_2;
            let minus = generator_distribution(spec, &shifted, t, None)?;
            shifted[j] = params[j];
            grad[j] +=
                plus.probs().iter().zip(minus.probs()).zip(&dq).map(|((a, b), d)| 0.5 * (a - b) * d).sum::<f64>();
        }
    }
    Ok(grad)
}
