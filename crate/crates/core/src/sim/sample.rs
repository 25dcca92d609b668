use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{bitstring, SimError, StateVector};

/// Measurement histogram. Keys are bitstrings with bit 0 rightmost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotCounts {
    pub counts: BTreeMap<String, u64>,
    pub shots: u64,
    pub seed: u64,
}

impl ShotCounts {
    pub fn get(&self, bits: &str) -> u64 {
        self.counts.get(bits).copied().unwrap_or(0)
    }

    pub fn frequency(&self, bits: &str) -> f64 {
        self.get(bits) as f64 / self.shots as f64
    }
}

/// Draws `shots` basis indices from the Born distribution of `state` and
/// returns a histogram keyed by basis index.
pub fn sample_indices(
    state: &StateVector,
    shots: u64,
    seed: u64,
) -> Result<BTreeMap<usize, u64>, SimError> {
    if shots < 1 {
        return Err(SimError::InvalidShots);
    }
    let mut cumulative = Vec::with_capacity(state.dim());
    let mut acc = 0.0;
    for a in state.amplitudes() {
        acc += a.norm_sqr();
        cumulative.push(acc);
    }
    if acc <= 0.0 {
        return Err(SimError::ZeroNorm);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hist = BTreeMap::new();
    for _ in 0..shots {
        let u = rng.gen::<f64>() * acc;
        let index = cumulative
            .partition_point(|&c| c <= u)
            .min(cumulative.len() - 1);
        *hist.entry(index).or_insert(0) += 1;
    }
    Ok(hist)
}

/// Folds a basis-index histogram onto measured bits. `map[b] = Some(q)` means
/// output bit `b` reads qubit `q`.
pub(crate) fn project_counts(
    hist: &BTreeMap<usize, u64>,
    map: &[Option<usize>],
    shots: u64,
    seed: u64,
) -> ShotCounts {
    let mut counts = BTreeMap::new();
    for (&index, &n) in hist {
        let value = map
            .iter()
            .enumerate()
            .filter_map(|(bit, q)| q.map(|q| ((index >> q) & 1) << bit))
            .fold(0, |acc, b| acc | b);
        *counts.entry(bitstring(value, map.len())).or_insert(0) += n;
    }
    ShotCounts {
        counts,
        shots,
        seed,
    }
}

/// Seeded coin flips: how many of `shots` trials land on `true` with
/// probability `p`.
pub fn sample_bernoulli(p: f64, shots: u64, seed: u64) -> Result<u64, SimError> {
    if shots < 1 {
        return Err(SimError::InvalidShots);
    }
    let p = p.clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..shots).filter(|_| rng.gen::<f64>() < p).count() as u64)
}
