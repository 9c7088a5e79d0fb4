use rand::Rng;

use super::generator::{gradient_parameter_shift, loss};
use crate::circuit::AnsatzSpec;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::simcore::{derive_seed, rng_from_seed};

/// SPSA gain schedule: `a_k = a / (k + 1 + A)^α`, `c_k = c / (k + 1)^γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpsaSchedule {
    pub a: f64,
    pub c: f64,
    pub big_a: f64,
    pub alpha: f64,
    pub gamma: f64,
}

impl Default for SpsaSchedule {
    fn default() -> Self {
        Self { a: 0.8, c: 0.15, big_a: 100.0, alpha: 0.602, gamma: 0.101 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Optimizer {
    Spsa(SpsaSchedule),
    /// Plain gradient descent on parameter-shift gradients.
    GradientDescent {
        learning_rate: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingConfig {
    pub optimizer: Optimizer,
    pub max_iters: usize,
    pub seed: u64,
    /// Stop once the best loss is at or below this value.
    pub convergence_tol: f64,
    /// KL smoothing floor used by the objective.
    pub eps: f64,
    /// Starting point; uniform on `[−0.1, 0.1]` from the seed when absent.
    pub initial: Option<Vec<f64>>,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self {
            optimizer: Optimizer::Spsa(SpsaSchedule::default()),
            max_iters: 2000,
            seed: 7,
            convergence_tol: 1e-9,
            eps: 1e-12,
            initial: None,
        }
    }
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidTraining(m.to_string()));
        match self.optimizer {
            Optimizer::Spsa(s) if !(s.a > 0.0 && s.c > 0.0 && s.big_a >= 0.0 && s.alpha > 0.0 && s.gamma > 0.0) => {
                return bad("SPSA gains must be positive");
            }
            Optimizer::GradientDescent { learning_rate } if !(learning_rate > 0.0) => {
                return bad("learning rate must be positive");
            }
            _ => {}
        }
        if !(self.eps > 0.0) {
            return bad("smoothing epsilon must be positive");
        }
        if self.convergence_tol < 0.0 {
            return bad("convergence tolerance must be non-negative");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingResult {
    /// Best parameters seen.
    pub params: Vec<f64>,
    /// Best-so-far loss: the initial loss, then one entry per iteration.
    pub trace: Vec<f64>,
}

impl TrainingResult {
    pub fn loss(&self) -> f64 {
        *self.trace.last().expect("trace holds the initial loss")
    }
}

/// Seeded start that reproduces the product of the targets' averaged
/// single-bit marginals: first-layer generator angles `2·asin(√p_q)`,
/// everything else near zero, all jittered by `U[−0.1, 0.1]`.
pub fn initial_params(spec: &AnsatzSpec, targets: &[Distribution], seed: u64) -> Vec<f64> {
    let mut rng = rng_from_seed(derive_seed(seed, 0));
    let n_gen = spec.n_generator;
    let mut ones = vec![0.0; n_gen];
    for d in targets {
        for (x, p) in d.probs().iter().enumerate() {
            for (q, m) in ones.iter_mut().enumerate() {
                if (x >> q) & 1 == 1 {
                    *m += p / targets.len() as f64;
                }
            }
        }
    }
    let first_layer = spec.rotated_qubits();
    (0..spec.num_parameters())
        .map(|i| {
            let base = match first_layer.get(i) {
                Some(&q) if q < n_gen && !targets.is_empty() => 2.0 * ones[q].clamp(0.0, 1.0).sqrt().asin(),
                _ => 0.0,
            };
            base + rng.random_range(-0.1..=0.1)
        })
        .collect()
}

/// Seeded angles for planted-target experiments: first-layer generator
/// rotations within ±0.5 of π/2, everything else within ±0.5 of zero.
pub fn planted_params(spec: &AnsatzSpec, seed: u64) -> Vec<f64> {
    let mut rng = rng_from_seed(derive_seed(seed, 2));
    let first_layer = spec.rotated_qubits();
    (0..spec.num_parameters())
        .map(|i| {
            let base = match first_layer.get(i) {
                Some(&q) if q < spec.n_generator => std::f64::consts::FRAC_PI_2,
                _ => 0.0,
            };
            base + rng.random_range(-0.5..=0.5)
        })
        .collect()
}

/// Minimizes the summed conditional KL loss. Returns the best parameters
/// found; identical configs give identical results.
pub fn train(spec: &AnsatzSpec, targets: &[Distribution], config: &TrainingConfig) -> Result<TrainingResult> {
    config.validate()?;
    let n = spec.num_parameters();
    let mut theta = match &config.initial {
        Some(p) if p.len() != n => return Err(Error::ParameterCount { expected: n, found: p.len() }),
        Some(p) => p.clone(),
        None => initial_params(spec, targets, config.seed),
    };
    let objective = |p: &[f64]| loss(spec, p, targets, config.eps);
    let mut best = theta.clone();
    let mut best_loss = objective(&theta)?;
    let mut trace = vec![best_loss];
    let mut rng = rng_from_seed(derive_seed(config.seed, 1));

    for k in 0..config.max_iters {
        if best_loss <= config.convergence_tol {
            break;
        }
        match config.optimizer {
            Optimizer::Spsa(s) => {
                let ak = s.a / (k as f64 + 1.0 + s.big_a).powf(s.alpha);
                let ck = s.c / (k as f64 + 1.0).powf(s.gamma);
                let delta: Vec<f64> = (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
                let plus: Vec<f64> = theta.iter().zip(&delta).map(|(t, d)| t + ck * d).collect();
                let minus: Vec<f64> = theta.iter().zip(&delta).map(|(t, d)| t - ck * d).collect();
                let diff = (objective(&plus)? - objective(&minus)?) / (2.0 * ck);
                theta.iter_mut().zip(&delta).for_each(|(t, d)| *t -= ak * diff * d);
            }
            Optimizer::GradientDescent { learning_rate } => {
                let g = gradient_parameter_shift(spec, &theta, targets, config.eps, None)?;
                theta.iter_mut().zip(&g).for_each(|(t, gi)| *t -= learning_rate * gi);
            }
        }
        let current = objective(&theta)?;
        if current < best_loss {
            best_loss = current;
            best.clone_from(&theta);
        }
        trace.push(best_loss);
    }
    Ok(TrainingResult { params: best, trace })
}
