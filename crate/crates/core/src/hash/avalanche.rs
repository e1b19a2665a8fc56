//! Avalanche statistics: how many digest bits change when message bits flip.

use rand::seq::index::sample;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ChaoticHasher, HashKey, KeyedHash};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::state::StateVector;

pub const MIN_AVALANCHE_TRIALS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AvalancheConfig {
    pub trials: usize,
    pub seed: u64,
    pub message_bytes: usize,
    /// Distinct message bits flipped per trial.
    pub flipped_bits: usize,
    pub exec: Execution,
}

impl Default for AvalancheConfig {
    fn default() -> Self {
        AvalancheConfig {
            trials: 1000,
            seed: 0,
            message_bytes: 64,
            flipped_bits: 1,
            exec: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AvalancheStats {
    pub trials: usize,
    pub n: usize,
    /// Mean Hamming distance between the two digests of a trial.
    pub mean: f64,
    /// Population standard deviation of that distance.
    pub stddev: f64,
    /// Fraction of trials in which each digest cell flipped, indexed by cell - 1.
    pub flip_rates: Vec<f64>,
}

impl AvalancheStats {
    pub fn min_rate(&self) -> f64 {
        self.flip_rates
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_rate(&self) -> f64 {
        self.flip_rates
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Hashes random messages and copies with `flipped_bits` bits flipped. Each
/// trial draws from its own generator stream, so results depend only on the
/// seed.
pub fn avalanche_stats<H: KeyedHash>(
    hasher: &ChaoticHasher<H>,
    key: &HashKey,
    config: &AvalancheConfig,
) -> Result<AvalancheStats> {
    if config.trials < MIN_AVALANCHE_TRIALS {
        return Err(Error::InvalidParameter(format!(
            "at least {MIN_AVALANCHE_TRIALS} trials required"
        )));
    }
    if config.flipped_bits > config.message_bytes * 8 {
        return Err(Error::InvalidParameter(
            "more flipped bits than message bits".into(),
        ));
    }
    let n = hasher.n();
    let terms = hasher.strategy_for(key);
    let diffs = par::map_indexed(config.exec, config.trials, |t| -> Result<StateVector> {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(t as u64);
        let mut message = vec![0u8; config.message_bytes];
        rng.fill_bytes(&mut message);
        let mut flipped = message.clone();
        for bit in sample(&mut rng, config.message_bytes * 8, config.flipped_bits) {
            flipped[bit / 8] ^= 1 << (bit % 8);
        }
        let a = hasher.hash_with_terms(key, &message, &terms)?;
        let b = hasher.hash_with_terms(key, &flipped, &terms)?;
        a.as_state().xor(b.as_state())
    });

    let mut counts = vec![0usize; n];
    let mut distances = Vec::with_capacity(config.trials);
    for diff in diffs {
        let diff = diff?;
        for i in diff.ones_indices() {
            counts[i - 1] += 1;
        }
        distances.push(diff.count_ones() as f64);
    }
    let trials = config.trials as f64;
    let mean = distances.iter().sum::<f64>() / trials;
    let var = distances.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / trials;
    Ok(AvalancheStats {
        trials: config.trials,
        n,
        mean,
        stddev: var.sqrt(),
        flip_rates: counts.into_iter().map(|c| c as f64 / trials).collect(),
    })
}
