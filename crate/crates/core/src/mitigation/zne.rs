//! Zero-noise extrapolation over globally folded circuits.

use std::fmt;
use std::str::FromStr;

use log::warn;
use nalgebra::{DMatrix, DVector};

use super::{noisy_distribution, observe};
use crate::circuit::{fold_global, Circuit};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::simcore::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExtrapolationMethod {
    #[default]
    Linear,
    Richardson,
    Exponential,
}

impl ExtrapolationMethod {
    pub fn min_points(self) -> usize {
        match self {
            ExtrapolationMethod::Exponential => 3,
            _ => 2,
        }
    }
}

impl FromStr for ExtrapolationMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" => Ok(Self::Linear),
            "richardson" => Ok(Self::Richardson),
            "exponential" | "exp" => Ok(Self::Exponential),
            other => Err(Error::Config(format!("unknown extrapolation method `{other}`"))),
        }
    }
}

impl fmt::Display for ExtrapolationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Linear => "linear",
            Self::Richardson => "richardson",
            Self::Exponential => "exponential",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtrapolationFit {
    /// Method that produced `zero_value` (differs from the request after a fallback).
    pub method: ExtrapolationMethod,
    pub points: Vec<(f64, f64)>,
    pub zero_value: f64,
    /// Sum of squared residuals at the fitted points.
    pub residual: f64,
    pub diagnostic: Option<String>,
}

/// Extrapolates `points = [(λ, y)]` to `λ = 0`.
///
/// An exponential fit with fewer than three points, or one whose optimum
/// runs off the search range, falls back to the linear fit and says so in
/// `diagnostic`.
pub fn extrapolate(points: &[(f64, f64)], method: ExtrapolationMethod) -> Result<ExtrapolationFit> {
    if points.len() < 2 {
        return Err(Error::InsufficientPoints { needed: 2, found: points.len() });
    }
    for (i, (x, y)) in points.iter().enumerate() {
        if !x.is_finite() || !y.is_finite() || *x < 1.0 {
            return Err(Error::SingularFit(format!("invalid point ({x}, {y})")));
        }
        if points[..i].iter().any(|(u, _)| u == x) {
            return Err(Error::SingularFit(format!("duplicate scale {x}")));
        }
    }
    match method {
        ExtrapolationMethod::Linear => Ok(linear_fit(points)),
        ExtrapolationMethod::Richardson => Ok(richardson_fit(points)),
        ExtrapolationMethod::Exponential => {
            if points.len() < 3 {
                return Ok(fallback(points, "exponential fit needs 3 points; used linear"));
            }
            Ok(exponential_fit(points))
        }
    }
}

fn fallback(points: &[(f64, f64)], why: &str) -> ExtrapolationFit {
    warn!("{why}");
    ExtrapolationFit { diagnostic: Some(why.to_string()), ..linear_fit(points) }
}

fn linear_fit(points: &[(f64, f64)]) -> ExtrapolationFit {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = points.iter().map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    ExtrapolationFit {
        method: ExtrapolationMethod::Linear,
        points: points.to_vec(),
        zero_value: intercept,
        residual,
        diagnostic: None,
    }
}

/// Lagrange interpolation through every point, evaluated at zero.
fn richardson_fit(points: &[(f64, f64)]) -> ExtrapolationFit {
    let zero_value = points
        .iter()
        .enumerate()
        .map(|(i, (xi, yi))| {
            let w: f64 =
                points.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, (xj, _))| xj / (xj - xi)).product();
            w * yi
        })
        .sum();
    ExtrapolationFit {
        method: ExtrapolationMethod::Richardson,
        points: points.to_vec(),
        zero_value,
        residual: 0.0,
        diagnostic: None,
    }
}

/// Best `(c, b)` for fixed decay rate `k`, and the squared residual.
fn exp_linear_part(points: &[(f64, f64)], k: f64) -> Option<(f64, f64, f64)> {
    let m = DMatrix::from_fn(points.len(), 2, |i, j| if j == 0 { 1.0 } else { (-k * points[i].0).exp() });
    let y = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));
    let mtm = m.transpose() * &m;
    let sol = mtm.lu().solve(&(m.transpose() * &y))?;
    let r = (&m * &sol - &y).norm_squared();
    r.is_finite().then_some((sol[0], sol[1], r))
}

/// `y = c + b·e^{−kλ}` by variable projection: `(c, b)` are linear given `k`,
/// so only the residual over `k` is minimized (log grid, then golden section).
fn exponential_fit(points: &[(f64, f64)]) -> ExtrapolationFit {
    const K_MIN: f64 = 1e-4;
    const K_MAX: f64 = 1e2;
    const GRID: usize = 300;
    let ks: Vec<f64> = (0..GRID).map(|i| K_MIN * (K_MAX / K_MIN).powf(i as f64 / (GRID - 1) as f64)).collect();
    let cost = |k: f64| exp_linear_part(points, k).map_or(f64::INFINITY, |r| r.2);
    let costs: Vec<f64> = ks.iter().map(|k| cost(*k)).collect();
    let best = (0..GRID).min_by(|a, b| costs[*a].total_cmp(&costs[*b])).expect("non-empty grid");
    let scale: f64 = points.iter().map(|p| p.1 * p.1).sum::<f64>().max(1e-300);
    if !costs[best].is_finite() {
        return fallback(points, "exponential fit is singular; used linear");
    }
    if (best == 0 || best == GRID - 1) && costs[best] > 1e-20 * scale {
        return fallback(points, "exponential fit did not converge; used linear");
    }
    let (mut lo, mut hi) = (ks[best.saturating_sub(1)].ln(), ks[(best + 1).min(GRID - 1)].ln());
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let a = hi - phi * (hi - lo);
        let b = lo + phi * (hi - lo);
        if cost(a.exp()) < cost(b.exp()) {
            hi = b;
        } else {
            lo = a;
        }
    }
    let k = ((lo + hi) / 2.0).exp();
    match exp_linear_part(points, k) {
        Some((c, b, residual)) => ExtrapolationFit {
            method: ExtrapolationMethod::Exponential,
            points: points.to_vec(),
            zero_value: c + b,
            residual,
            diagnostic: None,
        },
        None => fallback(points, "exponential fit is singular; used linear"),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZneResult {
    pub distribution: Distribution,
    /// One fit per outcome bin.
    pub fits: Vec<ExtrapolationFit>,
}

/// Bin-wise extrapolation of distributions produced by `execute(scale)`.
/// Negative extrapolated bins are clipped to zero before renormalizing.
pub fn zne_from_executor<F>(scales: &[usize], method: ExtrapolationMethod, mut execute: F) -> Result<ZneResult>
where
    F: FnMut(usize, usize) -> Result<Distribution>,
{
    if scales.len() < 2 {
        return Err(Error::InsufficientPoints { needed: 2, found: scales.len() });
    }
    let mut runs = Vec::with_capacity(scales.len());
    for (i, &s) in scales.iter().enumerate() {
        if s % 2 == 0 {
            return Err(Error::InvalidFoldScale(s));
        }
        runs.push(execute(i, s)?);
    }
    let bins = runs[0].len();
    if let Some(r) = runs.iter().find(|r| r.len() != bins) {
        return Err(Error::DimensionMismatch { expected: bins, found: r.len() });
    }
    let mut fits = Vec::with_capacity(bins);
    for b in 0..bins {
        let pts: Vec<(f64, f64)> = scales.iter().zip(&runs).map(|(s, r)| (*s as f64, r.probs()[b])).collect();
        fits.push(extrapolate(&pts, method)?);
    }
    let weights: Vec<f64> = fits.iter().map(|f| f.zero_value).collect();
    let distribution = match Distribution::from_weights(weights) {
        Ok(d) => d,
        // every bin extrapolated to ≤ 0: keep the least-amplified run
        Err(_) => runs[0].clone(),
    };
    Ok(ZneResult { distribution, fits })
}

/// Runs `circuit` under `noise` at each fold scale and extrapolates every
/// bin to zero noise. `shots = None` uses exact probabilities.
pub fn zne_distribution(
    circuit: &Circuit,
    noise: &NoiseModel,
    scales: &[usize],
    shots: Option<u64>,
    seed: u64,
    method: ExtrapolationMethod,
) -> Result<Distribution> {
    let result = zne_from_executor(scales, method, |i, s| {
        let folded = fold_global(circuit, s)?;
        observe(&noisy_distribution(&folded, noise)?, shots, derive_seed(seed, i as u64))
    })?;
    Ok(result.distribution)
}
