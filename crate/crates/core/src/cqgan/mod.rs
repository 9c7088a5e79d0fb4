//! Conditional generator: target construction, generator evaluation, the
//! summed-KL training objective with exact gradients, and training.

mod generator;
mod params_file;
mod targets;
mod train;

pub use generator::{generator_distribution, gradient_parameter_shift, loss};
pub use params_file::ParamsFile;
pub use targets::{target_distribution, target_set, MixtureComponent, TargetFamily, TargetKind};
pub use train::{initial_params, planted_params, train, Optimizer, SpsaSchedule, TrainingConfig, TrainingResult};
