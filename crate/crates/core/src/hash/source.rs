//! Strategy sources for the post-treatment.
//!
//! Both sources are driven by ChaCha20 seeded with `SHA-256(k2)`. The unary
//! source maps generator output to `1..=n` by rejection sampling on
//! `ceil(log2 n)`-bit draws. The stream source turns each `n`-bit frame into
//! a subset term whose indicator is `frame XOR block`, where `block` is the
//! next `n` bits of generator output; bit `j` of the indicator (cell `j + 1`)
//! selects index `j + 1`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest as _, Sha256};

use crate::error::{HashError, Result};
use crate::state::StateVector;
use crate::strategy::StrategyTerm;

fn keyed_rng(k2: &[u8]) -> ChaCha20Rng {
    ChaCha20Rng::from_seed(Sha256::digest(k2).into())
}

/// Uniform unary terms over `1..=n`.
pub struct PrngTerms {
    n: usize,
    mask: u32,
    rng: ChaCha20Rng,
}

impl PrngTerms {
    pub fn new(k2: &[u8], n: usize) -> Self {
        assert!(n >= 1, "n must be positive");
        let bits = usize::BITS - (n - 1).leading_zeros();
        PrngTerms {
            n,
            mask: ((1u64 << bits) - 1) as u32,
            rng: keyed_rng(k2),
        }
    }

    pub fn next_index(&mut self) -> usize {
        loop {
            let v = (self.rng.next_u32() & self.mask) as usize;
            if v < self.n {
                return v + 1;
            }
        }
    }
}

impl Iterator for PrngTerms {
    type Item = StrategyTerm;

    fn next(&mut self) -> Option<StrategyTerm> {
        Some(StrategyTerm::Unary(self.next_index()))
    }
}

/// The `n`-bit blocks `x^i` xored into stream frames.
pub struct MaskStream {
    n: usize,
    rng: Option<ChaCha20Rng>,
}

impl MaskStream {
    pub fn prng(k2: &[u8], n: usize) -> Self {
        MaskStream {
            n,
            rng: Some(keyed_rng(k2)),
        }
    }

    /// All-zero blocks: frames are used as strategy terms unmasked.
    pub fn disabled(n: usize) -> Self {
        MaskStream { n, rng: None }
    }

    pub fn next_block(&mut self) -> StateVector {
        let mut bytes = vec![0u8; self.n.div_ceil(8)];
        if let Some(rng) = &mut self.rng {
            rng.fill_bytes(&mut bytes);
            // clear bits above cell n in the leading byte
            let spare = bytes.len() * 8 - self.n;
            bytes[0] &= 0xff >> spare;
        }
        StateVector::from_bytes(self.n, &bytes).expect("masked to n bits")
    }
}

/// The subset term whose indicator vector is `frame XOR block`.
pub fn stream_term(frame: &StateVector, block: &StateVector) -> Result<StrategyTerm> {
    if frame.len() != block.len() {
        return Err(HashError::ShortFrame {
            expected: block.len(),
            found: frame.len(),
        }
        .into());
    }
    Ok(StrategyTerm::Subset(frame.xor(block)?.ones_indices()))
}

pub enum StrategySource {
    PrngDriven(PrngTerms),
    StreamDriven {
        n: usize,
        frames: Box<dyn Iterator<Item = StateVector> + Send>,
        mask: MaskStream,
    },
}

impl StrategySource {
    pub fn prng(k2: &[u8], n: usize) -> Self {
        StrategySource::PrngDriven(PrngTerms::new(k2, n))
    }

    pub fn stream(
        n: usize,
        frames: impl IntoIterator<Item = StateVector, IntoIter: Send + 'static>,
        mask: MaskStream,
    ) -> Self {
        StrategySource::StreamDriven {
            n,
            frames: Box::new(frames.into_iter()),
            mask,
        }
    }
}

/// The next `count` terms of `src`.
pub fn strategy_terms(src: &mut StrategySource, count: usize) -> Result<Vec<StrategyTerm>> {
    match src {
        StrategySource::PrngDriven(p) => Ok(p.take(count).collect()),
        StrategySource::StreamDriven { n, frames, mask } => {
            let mut out = Vec::with_capacity(count);
            for got in 0..count {
                let frame = frames
                    .next()
                    .ok_or(HashError::FrameUnderflow { needed: count, got })?;
                if frame.len() != *n {
                    return Err(HashError::ShortFrame {
                        expected: *n,
                        found: frame.len(),
                    }
                    .into());
                }
                out.push(stream_term(&frame, &mask.next_block())?);
            }
            Ok(out)
        }
    }
}
