//! WebAssembly bindings for the browser demo: train the generator on the
//! bundled targets, then run one condition through noise and mitigation.

use qloadbench::analysis::{empirical_epsilon, kl_divergence};
use qloadbench::circuit::{build_cqgan, fold_global, AnsatzSpec};
use qloadbench::cqgan::{target_set, train, TargetFamily, TrainingConfig};
use qloadbench::mitigation::{
    ideal_distribution, measurement_calibrate, mitigate_distribution, noisy_distribution, observe, zne_from_executor,
    CalibrationScheme, ExtrapolationMethod,
};
use qloadbench::noise::NoiseModel;
use qloadbench::simcore::derive_seed;
use qloadbench::{Distribution, Error, Result};
use wasm_bindgen::prelude::*;

fn spec(reps: usize) -> AnsatzSpec {
    AnsatzSpec { reps, ..AnsatzSpec::default() }
}

#[wasm_bindgen]
pub struct TrainedModel {
    reps: usize,
    params: Vec<f64>,
    trace: Vec<f64>,
}

#[wasm_bindgen]
impl TrainedModel {
    #[wasm_bindgen(getter)]
    pub fn reps(&self) -> usize {
        self.reps
    }

    #[wasm_bindgen(getter)]
    pub fn params(&self) -> Vec<f64> {
        self.params.clone()
    }

    /// Best-so-far loss per iteration, starting with the initial loss.
    #[wasm_bindgen(getter)]
    pub fn trace(&self) -> Vec<f64> {
        self.trace.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn loss(&self) -> f64 {
        *self.trace.last().unwrap_or(&f64::NAN)
    }
}

#[wasm_bindgen]
pub struct ConditionRun {
    ideal: Vec<f64>,
    noisy: Vec<f64>,
    mitigated: Vec<f64>,
    kl_noisy: f64,
    kl_mitigated: f64,
}

#[wasm_bindgen]
impl ConditionRun {
    #[wasm_bindgen(getter)]
    pub fn ideal(&self) -> Vec<f64> {
        self.ideal.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn noisy(&self) -> Vec<f64> {
        self.noisy.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn mitigated(&self) -> Vec<f64> {
        self.mitigated.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn kl_noisy(&self) -> f64 {
        self.kl_noisy
    }

    #[wasm_bindgen(getter)]
    pub fn kl_mitigated(&self) -> f64 {
        self.kl_mitigated
    }
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Bundled target for condition `t`.
pub fn target_probs(t: usize) -> Result<Vec<f64>> {
    let all = target_set(&TargetFamily::bundled_bimodal(), 4)?;
    all.get(t).map(|d| d.probs().to_vec()).ok_or(Error::ConditionOutOfRange { t, max: 4 })
}

pub fn train_model(reps: usize, iterations: usize, seed: u64) -> Result<TrainedModel> {
    let spec = spec(reps);
    let targets = target_set(&TargetFamily::bundled_bimodal(), spec.num_conditions())?;
    let cfg = TrainingConfig { max_iters: iterations, seed, ..TrainingConfig::default() };
    let r = train(&spec, &targets, &cfg)?;
    Ok(TrainedModel { reps, params: r.params, trace: r.trace })
}

/// Ideal, noisy and zne+meas mitigated distributions of condition `t`.
/// `shots = 0` uses exact probabilities.
pub fn run_model(
    model: &TrainedModel,
    t: usize,
    p2: f64,
    readout_flip: f64,
    shots: u64,
    seed: u64,
) -> Result<ConditionRun> {
    let circuit = build_cqgan(t, &spec(model.reps), &model.params)?;
    let noise = NoiseModel::builder().p1(p2 / 10.0).p2(p2).readout_flip(readout_flip).build()?;
    let shots = (shots > 0).then_some(shots);
    let eps = shots.map_or(1e-12, empirical_epsilon);
    let measured = circuit.measured_qubits();

    let ideal = ideal_distribution(&circuit)?;
    let noisy = observe(&noisy_distribution(&circuit, &noise)?, shots, derive_seed(seed, 0))?;
    let a =
        measurement_calibrate(&noise, &measured, CalibrationScheme::Tensored, shots, derive_seed(seed, 1))?.matrix();
    let mitigated = zne_from_executor(&[1, 3, 5], ExtrapolationMethod::Linear, |i, s| {
        let run: Distribution =
            observe(&noisy_distribution(&fold_global(&circuit, s)?, &noise)?, shots, derive_seed(seed, 2 + i as u64))?;
        Ok(mitigate_distribution(&run, &a)?.distribution)
    })?
    .distribution;

    Ok(ConditionRun {
        kl_noisy: kl_divergence(&ideal, &noisy, eps)?,
        kl_mitigated: kl_divergence(&ideal, &mitigated, eps)?,
        ideal: ideal.into_probs(),
        noisy: noisy.into_probs(),
        mitigated: mitigated.into_probs(),
    })
}

#[wasm_bindgen]
pub fn target(t: usize) -> std::result::Result<Vec<f64>, JsError> {
    target_probs(t).map_err(js)
}

#[wasm_bindgen]
pub fn train_generator(reps: usize, iterations: usize, seed: u32) -> std::result::Result<TrainedModel, JsError> {
    train_model(reps, iterations, seed.into()).map_err(js)
}

#[wasm_bindgen]
pub fn run_condition(
    model: &TrainedModel,
    t: usize,
    p2: f64,
    readout_flip: f64,
    shots: u32,
    seed: u32,
) -> std::result::Result<ConditionRun, JsError> {
    run_model(model, t, p2, readout_flip, shots.into(), seed.into()).map_err(js)
}
