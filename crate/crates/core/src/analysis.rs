//! Distribution comparison metrics and the KL report.
//!
//! KL divergences are in nats and always oriented `KL(ideal ‖ measured)`.

use std::io::{Read, Write};

use crate::distribution::{CountsHistogram, Distribution};
use crate::error::{Error, Result};

/// `Σ P'ᵢ ln(P'ᵢ / Q'ᵢ)` where both vectors are floored at `eps` and renormalized.
pub fn kl_divergence(p: &Distribution, q: &Distribution, eps: f64) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), found: q.len() });
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidProbability { what: "KL smoothing epsilon", value: eps });
    }
    let floor = |d: &Distribution| {
        let v: Vec<f64> = d.probs().iter().map(|x| x.max(eps)).collect();
        let s: f64 = v.iter().sum();
        v.into_iter().map(move |x| x / s)
    };
    let kl: f64 = floor(p).zip(floor(q)).map(|(a, b)| a * (a / b).ln()).sum();
    Ok(kl.max(0.0))
}

/// `½ Σ |Pᵢ − Qᵢ|`.
pub fn total_variation(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), found: q.len() });
    }
    Ok(0.5 * p.probs().iter().zip(q.probs()).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

pub fn histogram_to_distribution(h: &CountsHistogram) -> Result<Distribution> {
    h.to_distribution()
}

/// Smoothing floor used when scoring a histogram of `shots` samples.
pub fn empirical_epsilon(shots: u64) -> f64 {
    1.0 / (10.0 * shots as f64)
}

/// `100 · (baseline − improved) / baseline`; negative when `improved` is worse.
pub fn improvement_percent(kl_baseline: f64, kl_improved: f64) -> Result<f64> {
    if !(kl_baseline > 0.0) {
        return Err(Error::InvalidProbability { what: "baseline KL", value: kl_baseline });
    }
    Ok(100.0 * (kl_baseline - kl_improved) / kl_baseline)
}

/// One condition's row of the KL report.
#[derive(Debug, Clone, PartialEq)]
pub struct KlRow {
    pub condition: usize,
    pub kl_ideal_sampled: f64,
    pub kl_noisy: f64,
    pub kl_mitigated: f64,
    /// NaN when the noisy baseline has zero divergence.
    pub improvement_percent: f64,
}

impl KlRow {
    pub fn new(condition: usize, kl_ideal_sampled: f64, kl_noisy: f64, kl_mitigated: f64) -> Self {
        let improvement_percent = improvement_percent(kl_noisy, kl_mitigated).unwrap_or(f64::NAN);
        Self { condition, kl_ideal_sampled, kl_noisy, kl_mitigated, improvement_percent }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct KlReport {
    pub rows: Vec<KlRow>,
}

pub const REPORT_HEADER: [&str; 5] =
    ["condition", "kl_ideal_sampled", "kl_noisy", "kl_mitigated", "improvement_percent"];

impl KlReport {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(REPORT_HEADER)?;
        for r in &self.rows {
            out.write_record([
                r.condition.to_string(),
                format!("{:.12}", r.kl_ideal_sampled),
                format!("{:.12}", r.kl_noisy),
                format!("{:.12}", r.kl_mitigated),
                format!("{:.6}", r.improvement_percent),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let headers = rdr.headers()?.clone();
        if headers.iter().ne(REPORT_HEADER) {
            return Err(Error::Parse { line: 1, message: format!("unexpected report header {headers:?}") });
        }
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let num = |k: usize| -> Result<f64> {
                rec[k].parse().map_err(|e| Error::Parse { line: i + 2, message: format!("column {k}: {e}") })
            };
            rows.push(KlRow {
                condition: num(0)? as usize,
                kl_ideal_sampled: num(1)?,
                kl_noisy: num(2)?,
                kl_mitigated: num(3)?,
                improvement_percent: num(4)?,
            });
        }
        Ok(Self { rows })
    }
}
