//! Readout-error calibration and constrained least-squares correction.

use log::warn;
use nalgebra::{DMatrix, DVector};

use crate::distribution::{CountsHistogram, Distribution};
use crate::error::{Error, Result};
use crate::noise::{apply_readout_error, kron_assignments, AssignmentMatrix, NoiseModel};
use crate::simcore::{derive_seed, sample_counts};

/// Condition number above which an assignment matrix is flagged.
pub const ILL_CONDITIONED: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalibrationScheme {
    /// One 2×2 matrix per qubit, assuming independent readout errors.
    Tensored,
    /// One column per basis state of the whole register.
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Calibration {
    Tensored(Vec<AssignmentMatrix>),
    Full(DMatrix<f64>),
}

impl Calibration {
    /// Full `2^k × 2^k` matrix (Kronecker product for the tensored scheme,
    /// `qubits[0]` on the least-significant bit).
    pub fn matrix(&self) -> DMatrix<f64> {
        match self {
            Calibration::Tensored(mats) => kron_assignments(mats),
            Calibration::Full(m) => m.clone(),
        }
    }
}

/// Estimates the assignment matrix of `qubits` by preparing basis states
/// ideally and reading them out through `noise`. `shots = None` uses exact
/// probabilities.
pub fn measurement_calibrate(
    noise: &NoiseModel,
    qubits: &[usize],
    scheme: CalibrationScheme,
    shots: Option<u64>,
    seed: u64,
) -> Result<Calibration> {
    if qubits.is_empty() {
        return Err(Error::EmptyQubitList);
    }
    let column = |prepared: usize, qs: &[usize], stream: u64| -> Result<Vec<f64>> {
        let ideal = Distribution::point_mass(1 << qs.len(), prepared);
        let read = apply_readout_error(&ideal, noise, qs)?;
        match shots {
            None => Ok(read.into_probs()),
            Some(s) => Ok(sample_counts(&read, s, derive_seed(seed, stream))?.to_distribution()?.into_probs()),
        }
    };
    match scheme {
        CalibrationScheme::Tensored => {
            let mut mats = Vec::with_capacity(qubits.len());
            for (j, &q) in qubits.iter().enumerate() {
                let c0 = column(0, &[q], 2 * j as u64)?;
                let c1 = column(1, &[q], 2 * j as u64 + 1)?;
                mats.push(AssignmentMatrix::new([[c0[0], c1[0]], [c0[1], c1[1]]])?);
            }
            Ok(Calibration::Tensored(mats))
        }
        CalibrationScheme::Full => {
            let dim = 1usize << qubits.len();
            let mut m = DMatrix::zeros(dim, dim);
            for j in 0..dim {
                for (i, v) in column(j, qubits, j as u64)?.into_iter().enumerate() {
                    m[(i, j)] = v;
                }
            }
            Ok(Calibration::Full(m))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutCorrection {
    pub distribution: Distribution,
    pub condition_number: f64,
    /// Set when the assignment matrix is ill-conditioned.
    pub diagnostic: Option<String>,
}

/// Solves `min ‖A·p − ĉ‖₂` over the probability simplex for normalized counts ĉ.
pub fn measurement_mitigate(counts: &CountsHistogram, a: &DMatrix<f64>) -> Result<ReadoutCorrection> {
    mitigate_distribution(&counts.to_distribution()?, a)
}

/// Same as [`measurement_mitigate`] for an already-normalized observation.
pub fn mitigate_distribution(observed: &Distribution, a: &DMatrix<f64>) -> Result<ReadoutCorrection> {
    let n = observed.len();
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: a.nrows() });
    }
    for j in 0..n {
        let s: f64 = a.column(j).sum();
        if (s - 1.0).abs() > 1e-6 || a.column(j).iter().any(|v| *v < 0.0) {
            return Err(Error::InvalidAssignment(format!("column {j} is not stochastic (sum {s})")));
        }
    }
    let sv = a.clone().singular_values();
    let smax = sv.max();
    let smin = sv.min();
    let condition_number = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let diagnostic = (condition_number > ILL_CONDITIONED).then(|| {
        let msg = format!("assignment matrix is ill-conditioned (condition number {condition_number:.3e})");
        warn!("{msg}");
        msg
    });
    let c = DVector::from_column_slice(observed.probs());

    // interior solutions come straight from the linear solve
    if let Some(p) = a.clone().lu().solve(&c) {
        if p.iter().all(|x| *x >= -1e-12) {
            let distribution = Distribution::from_weights(p.iter().copied().collect())?;
            return Ok(ReadoutCorrection { distribution, condition_number, diagnostic });
        }
    }
    let p = projected_least_squares(a, &c, smax * smax);
    Ok(ReadoutCorrection { distribution: Distribution::from_weights(p)?, condition_number, diagnostic })
}

/// Accelerated projected gradient on `½‖A p − c‖²` over the simplex.
fn projected_least_squares(a: &DMatrix<f64>, c: &DVector<f64>, lipschitz: f64) -> Vec<f64> {
    let step = 1.0 / lipschitz.max(1e-300);
    let at = a.transpose();
    let mut x = DVector::from_vec(project_simplex(c.as_slice()));
    let mut y = x.clone();
    let mut t = 1.0_f64;
    for _ in 0..50_000 {
        let grad = &at * (a * &y - c);
        let next = DVector::from_vec(project_simplex((&y - grad * step).as_slice()));
        let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        y = &next + (&next - &x) * ((t - 1.0) / t_next);
        let moved = (&next - &x).amax();
        x = next;
        t = t_next;
        if moved < 1e-15 {
            break;
        }
    }
    x.iter().copied().collect()
}

/// Euclidean projection onto `{p ≥ 0, Σp = 1}`.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (i, ui) in u.iter().enumerate() {
        cumsum += ui;
        let candidate = (cumsum - 1.0) / (i + 1) as f64;
        if ui - candidate > 0.0 {
            theta = candidate;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}
