//! Noisy execution with a configurable mitigation stack.

use super::config::{MeasOptions, MitigationPlan};
use crate::circuit::{fold_global, Circuit};
use crate::distribution::{CountsHistogram, Distribution};
use crate::error::Result;
use crate::mitigation::{
    measurement_calibrate, mitigate_distribution, noisy_distribution, observe, pauli_twirl, pec_exact_density,
    pec_mitigated_distribution, zne_from_executor,
};
use crate::noise::{apply_readout_error, NoiseModel};
use crate::simcore::{derive_seed, sample_counts};
use nalgebra::DMatrix;

const CALIBRATION_STREAM: u64 = 0;
const EXECUTION_STREAM: u64 = 1;

/// Runs `circuit` through the noisy pipeline and applies `plan`.
/// `shots = None` replaces every sampling step by exact probabilities.
pub fn mitigated_distribution(
    circuit: &Circuit,
    noise: &NoiseModel,
    plan: &MitigationPlan,
    shots: Option<u64>,
    seed: u64,
) -> Result<Distribution> {
    let measured = circuit.measured_qubits();
    let assignment = match &plan.meas {
        Some(m) => Some(calibrate(noise, &measured, m, shots, derive_seed(seed, CALIBRATION_STREAM))?),
        None => None,
    };
    let correct = |d: Distribution| -> Result<Distribution> {
        match &assignment {
            Some(a) => Ok(mitigate_distribution(&d, a)?.distribution),
            None => Ok(d),
        }
    };
    let exec_seed = derive_seed(seed, EXECUTION_STREAM);

    if let Some(samples) = plan.pec_samples {
        let raw = match shots {
            None => {
                let rho = pec_exact_density(circuit, noise)?;
                apply_readout_error(&rho.probabilities(&measured)?, noise, &measured)?
            }
            Some(_) => pec_mitigated_distribution(circuit, noise, samples, exec_seed)?.distribution,
        };
        return correct(raw);
    }

    let run =
        |c: &Circuit, s: u64| -> Result<Distribution> { correct(execute(c, noise, plan.twirl_instances, shots, s)?) };
    match &plan.zne {
        Some(z) => {
            let result = zne_from_executor(&z.scales, z.method, |i, scale| {
                run(&fold_global(circuit, scale)?, derive_seed(exec_seed, i as u64))
            })?;
            Ok(result.distribution)
        }
        None => run(circuit, exec_seed),
    }
}

fn calibrate(
    noise: &NoiseModel,
    measured: &[usize],
    opts: &MeasOptions,
    shots: Option<u64>,
    seed: u64,
) -> Result<DMatrix<f64>> {
    let cal_shots = if opts.exact_calibration { None } else { shots };
    Ok(measurement_calibrate(noise, measured, opts.scheme, cal_shots, seed)?.matrix())
}

/// Plain noisy run, or the average over `twirls` twirled copies with the
/// shot budget split evenly between them.
fn execute(
    circuit: &Circuit,
    noise: &NoiseModel,
    twirls: Option<usize>,
    shots: Option<u64>,
    seed: u64,
) -> Result<Distribution> {
    let Some(n) = twirls else {
        return observe(&noisy_distribution(circuit, noise)?, shots, seed);
    };
    let mut exact: Option<Vec<f64>> = None;
    let mut counts: Option<Vec<u64>> = None;
    for i in 0..n {
        let twirled = pauli_twirl(circuit, derive_seed(seed, 2 * i as u64));
        let dist = noisy_distribution(&twirled, noise)?;
        match shots {
            None => {
                let acc = exact.get_or_insert_with(|| vec![0.0; dist.len()]);
                acc.iter_mut().zip(dist.probs()).for_each(|(a, p)| *a += p / n as f64);
            }
            Some(total) => {
                let share = total / n as u64 + u64::from((i as u64) < total % n as u64);
                let acc = counts.get_or_insert_with(|| vec![0; dist.len()]);
                if share > 0 {
                    let h = sample_counts(&dist, share, derive_seed(seed, 2 * i as u64 + 1))?;
                    acc.iter_mut().zip(h.counts()).for_each(|(a, c)| *a += c);
                }
            }
        }
    }
    match (exact, counts) {
        (Some(p), _) => Distribution::from_weights(p),
        (_, Some(c)) => CountsHistogram::new(c).to_distribution(),
        _ => unreachable!("at least one twirl instance"),
    }
}
