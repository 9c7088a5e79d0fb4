use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution as _};

use crate::distribution::{CountsHistogram, Distribution};
use crate::error::{Error, Result};

/// Seeded generator used everywhere randomness is consumed.
pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic child seed for sub-stream `index` of `parent`
/// (SplitMix64 finalizer over the pair).
pub fn derive_seed(parent: u64, index: u64) -> u64 {
    let mut z = parent ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Multinomial draw of `shots` outcomes from `dist`, via sequential
/// conditional binomials. Identical `(dist, shots, seed)` give identical counts.
pub fn sample_counts(dist: &Distribution, shots: u64, seed: u64) -> Result<CountsHistogram> {
    let mut rng = rng_from_seed(seed);
    sample_counts_with(dist, shots, &mut rng)
}

pub fn sample_counts_with(dist: &Distribution, shots: u64, rng: &mut SimRng) -> Result<CountsHistogram> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let probs = dist.probs();
    let mut counts = vec![0u64; probs.len()];
    let mut remaining = shots;
    let mut mass = 1.0;
    for (i, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if i == probs.len() - 1 || mass <= 0.0 {
            counts[i] = remaining;
            break;
        }
        let q = (p / mass).clamp(0.0, 1.0);
        let k = if q >= 1.0 {
            remaining
        } else if q <= 0.0 {
            0
        } else {
            Binomial::new(remaining, q).expect("q in (0,1)").sample(rng)
        };
        counts[i] = k;
        remaining -= k;
        mass -= p;
    }
    // dist mass exhausted early: dump leftovers on the last supported outcome
    if remaining > 0 && counts.iter().sum::<u64>() < shots {
        let last = probs.iter().rposition(|p| *p > 0.0).unwrap_or(probs.len() - 1);
        counts[last] += remaining;
    }
    Ok(CountsHistogram::new(counts))
}

/// Draws a single outcome index.
pub fn sample_outcome<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.iter().rposition(|p| *p > 0.0).unwrap_or(probs.len() - 1)
}
