//! Simulation toolkit for conditional distribution-loading circuits on
//! noisy devices.
//!
//! The crate simulates a conditional two-local generator circuit exactly,
//! attaches open noise models, applies four error-mitigation families (zero
//! noise extrapolation, probabilistic error cancellation, Pauli twirling and
//! readout mitigation), and scores every pipeline by its KL divergence to the
//! ideal output distribution.

// `!(x > 0.0)` rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod circuit;
#[cfg(feature = "cli")]
pub mod cli;
pub mod cqgan;
pub mod distribution;
pub mod error;
pub mod mitigation;
pub mod noise;
pub mod simcore;

pub use distribution::{CountsHistogram, Distribution};
pub use error::{Error, Result};
