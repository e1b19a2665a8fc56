//! Stream mode: the digest of frame 0 seeds the state, and every later frame,
//! xored with a keyed mask block, selects the cells updated in one step.

use super::{ChaoticHasher, Digest, HashKey, HmacSha256, KeyedHash, MaskStream, PostFunction};
use crate::error::{HashError, Result};
use crate::state::StateVector;

use super::post::post_treatment;
use super::source::stream_term;

/// A running stream hash. Owns its state; move it between threads as needed,
/// but feed it from one place at a time.
pub struct StreamHasher<H = HmacSha256> {
    inner: H,
    update: PostFunction,
    k1: Vec<u8>,
    mask: MaskStream,
    state: Option<Digest>,
    frames: usize,
}

impl<H: KeyedHash + Clone> StreamHasher<H> {
    pub fn new(hasher: &ChaoticHasher<H>, key: &HashKey) -> Self {
        let n = hasher.n();
        StreamHasher {
            inner: hasher.inner().clone(),
            update: hasher.update().clone(),
            k1: key.k1().to_vec(),
            mask: MaskStream::prng(key.k2(), n),
            state: None,
            frames: 0,
        }
    }

    /// Uses frames as strategy terms without the keyed mask.
    pub fn without_mask(mut self) -> Self {
        self.mask = MaskStream::disabled(self.inner.output_bits());
        self
    }
}

impl<H: KeyedHash> StreamHasher<H> {
    pub fn n(&self) -> usize {
        self.inner.output_bits()
    }

    /// Feeds one `n`-bit frame and returns the running digest.
    pub fn push(&mut self, frame: &StateVector) -> Result<Digest> {
        let n = self.n();
        if frame.len() != n {
            return Err(HashError::ShortFrame {
                expected: n,
                found: frame.len(),
            }
            .into());
        }
        let next = match &self.state {
            None => self.inner.digest(&self.k1, &frame.to_bytes()),
            Some(x) => {
                let term = stream_term(frame, &self.mask.next_block())?;
                post_treatment(x, &[term], &self.update)?
            }
        };
        self.frames += 1;
        self.state = Some(next.clone());
        Ok(next)
    }

    pub fn digest(&self) -> Option<&Digest> {
        self.state.as_ref()
    }

    pub fn frames(&self) -> usize {
        self.frames
    }
}

/// Running digests of a whole stream with the default hasher.
pub fn chaotic_hash_stream(
    key: &HashKey,
    frames: impl IntoIterator<Item = StateVector>,
) -> Result<Vec<Digest>> {
    let mut session = StreamHasher::new(&ChaoticHasher::new(), key);
    let out = frames
        .into_iter()
        .map(|f| session.push(&f))
        .collect::<Result<Vec<_>>>()?;
    if out.is_empty() {
        return Err(HashError::EmptyStream.into());
    }
    Ok(out)
}
