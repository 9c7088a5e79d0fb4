use statrs::distribution::{ContinuousCDF, LogNormal, Normal};

use crate::distribution::Distribution;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureComponent {
    pub weight: f64,
    pub mean: f64,
    pub std: f64,
}

impl MixtureComponent {
    pub fn new(weight: f64, mean: f64, std: f64) -> Self {
        Self { weight, mean, std }
    }
}

/// Shape of the per-condition target densities.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetKind {
    /// Log-normal with `σ√(t+1)` at condition `t`.
    Lognormal { mu: f64, sigma: f64 },
    /// One mixture per condition; a single mixture is shared by all conditions.
    GaussianMixture(Vec<Vec<MixtureComponent>>),
    /// Explicit bin weights per condition; a single vector is shared.
    Explicit(Vec<Vec<f64>>),
}

/// Target densities discretized onto `bins` equal-width bins of `support`.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetFamily {
    pub kind: TargetKind,
    pub bins: usize,
    pub support: (f64, f64),
}

impl TargetFamily {
    /// Four two-component mixtures on `[0, 1]` whose peaks drift apart as the
    /// condition index grows: a dominant narrow peak on the left and a wider
    /// minor mode that forms the right tail.
    pub fn bundled_bimodal() -> Self {
        let mixtures = (0..4)
            .map(|t| {
                let t = t as f64;
                let sep = 0.3 + 0.05 * t;
                vec![
                    MixtureComponent::new(0.65, 0.45 - sep / 2.0, 0.11),
                    MixtureComponent::new(0.35, 0.45 + sep / 2.0, 0.17 + 0.01 * t),
                ]
            })
            .collect();
        Self { kind: TargetKind::GaussianMixture(mixtures), bins: 32, support: (0.0, 1.0) }
    }

    pub fn lognormal(mu: f64, sigma: f64, bins: usize, support: (f64, f64)) -> Self {
        Self { kind: TargetKind::Lognormal { mu, sigma }, bins, support }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.support;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidTarget(format!("degenerate support [{lo}, {hi}]")));
        }
        if self.bins == 0 {
            return Err(Error::InvalidTarget("zero bins".into()));
        }
        match &self.kind {
            TargetKind::Lognormal { sigma, .. } if !(*sigma > 0.0) => {
                Err(Error::InvalidTarget(format!("lognormal sigma {sigma} must be positive")))
            }
            TargetKind::GaussianMixture(ms) => {
                if ms.is_empty() {
                    return Err(Error::InvalidTarget("no mixtures".into()));
                }
                for m in ms {
                    let w: f64 = m.iter().map(|c| c.weight).sum();
                    if m.is_empty() || (w - 1.0).abs() > 1e-9 || m.iter().any(|c| c.weight < 0.0) {
                        return Err(Error::InvalidTarget(format!("mixture weights sum to {w}")));
                    }
                    if let Some(c) = m.iter().find(|c| !(c.std > 0.0)) {
                        return Err(Error::InvalidTarget(format!("component std {} must be positive", c.std)));
                    }
                }
                Ok(())
            }
            TargetKind::Explicit(vs) => {
                if vs.is_empty() || vs.iter().any(|v| v.len() != self.bins) {
                    return Err(Error::InvalidTarget(format!("explicit targets must have {} bins", self.bins)));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Discretized target for condition `t`: probability mass per bin,
/// renormalized over the support.
pub fn target_distribution(family: &TargetFamily, t: usize) -> Result<Distribution> {
    family.validate()?;
    let (lo, hi) = family.support;
    let width = (hi - lo) / family.bins as f64;
    let edges: Vec<f64> = (0..=family.bins).map(|i| lo + width * i as f64).collect();
    let binned =
        |cdf: &dyn Fn(f64) -> f64| -> Vec<f64> { edges.windows(2).map(|e| (cdf(e[1]) - cdf(e[0])).max(0.0)).collect() };
    let weights = match &family.kind {
        TargetKind::Lognormal { mu, sigma } => {
            let d = LogNormal::new(*mu, sigma * ((t + 1) as f64).sqrt())
                .map_err(|e| Error::InvalidTarget(e.to_string()))?;
            binned(&|x| if x <= 0.0 { 0.0 } else { d.cdf(x) })
        }
        TargetKind::GaussianMixture(ms) => {
            let m = pick(ms, t)?;
            let comps = m
                .iter()
                .map(|c| Normal::new(c.mean, c.std).map(|n| (c.weight, n)))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::InvalidTarget(e.to_string()))?;
            binned(&|x| comps.iter().map(|(w, n)| w * n.cdf(x)).sum())
        }
        TargetKind::Explicit(vs) => pick(vs, t)?.clone(),
    };
    Distribution::from_weights(weights).map_err(|_| Error::InvalidTarget("no mass inside the support".into()))
}

/// All `n` conditional targets.
pub fn target_set(family: &TargetFamily, n: usize) -> Result<Vec<Distribution>> {
    (0..n).map(|t| target_distribution(family, t)).collect()
}

fn pick<T>(items: &[T], t: usize) -> Result<&T> {
    match items.len() {
        1 => Ok(&items[0]),
        n if t < n => Ok(&items[t]),
        n => Err(Error::ConditionOutOfRange { t, max: n }),
    }
}
