//! Chaos-preserving post-treatment of a keyed hash.
//!
//! `H(k, m)` computes `X = h(k1, m)` with an inner keyed hash, then applies
//! `r` chaotic-iteration steps to `X` with strategy terms drawn from a
//! generator keyed by `k2`. For a fixed key the steps form a bijection of the
//! digest space, so two messages collide under `H` exactly when they collide
//! under `h`.
//!
//! Digests render as lowercase hex, most-significant byte first, with cell 1
//! in the low bit of the last byte.

mod avalanche;
mod inner;
mod post;
mod source;
mod stream;

pub use avalanche::{avalanche_stats, AvalancheConfig, AvalancheStats};
pub use inner::{inner_hash, HmacSha256, KeyedHash};
pub use post::{
    certify, invert_post_treatment, post_treatment, PostFunction, XorCoupled,
    MAX_EXHAUSTIVE_CERTIFICATION,
};
pub use source::{strategy_terms, stream_term, MaskStream, PrngTerms, StrategySource};
pub use stream::{chaotic_hash_stream, StreamHasher};

use std::fmt;

use crate::error::{HashError, Result};
use crate::state::StateVector;
use crate::strategy::StrategyTerm;

/// Minimum key component length for [`HashKey::new`].
pub const MIN_KEY_BITS: usize = 128;

/// An `n`-bit digest.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digest(StateVector);

impl Digest {
    pub fn from_state(bits: StateVector) -> Self {
        Digest(bits)
    }

    pub fn from_hex(n: usize, text: &str) -> Result<Self> {
        Ok(Digest(StateVector::from_hex(n, text)?))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_state(&self) -> &StateVector {
        &self.0
    }

    pub fn into_state(self) -> StateVector {
        self.0
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.to_bytes()
    }

    pub fn to_hex(&self) -> String {
        self.0.to_hex()
    }
}

impl fmt::Debug for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest({})", self.to_hex())
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// The key triple `(k1, k2, r)`: inner-hash key, strategy seed and round
/// count. Without an explicit round count the post-treatment runs one round
/// per digest bit.
#[derive(Clone, PartialEq, Eq)]
pub struct HashKey {
    k1: Vec<u8>,
    k2: Vec<u8>,
    rounds: Option<usize>,
}

impl HashKey {
    /// Both components must carry at least [`MIN_KEY_BITS`] bits.
    pub fn new(k1: impl Into<Vec<u8>>, k2: impl Into<Vec<u8>>) -> Result<Self> {
        let key = Self::insecure(k1, k2);
        for (component, bytes) in [("k1", &key.k1), ("k2", &key.k2)] {
            if bytes.len() * 8 < MIN_KEY_BITS {
                return Err(HashError::KeyTooShort {
                    component,
                    bits: bytes.len() * 8,
                    min: MIN_KEY_BITS,
                }
                .into());
            }
        }
        Ok(key)
    }

    /// Skips the key length check, for toy configurations and tests.
    pub fn insecure(k1: impl Into<Vec<u8>>, k2: impl Into<Vec<u8>>) -> Self {
        HashKey {
            k1: k1.into(),
            k2: k2.into(),
            rounds: None,
        }
    }

    pub fn with_rounds(mut self, rounds: usize) -> Self {
        self.rounds = Some(rounds);
        self
    }

    pub fn k1(&self) -> &[u8] {
        &self.k1
    }

    pub fn k2(&self) -> &[u8] {
        &self.k2
    }

    pub fn rounds(&self) -> Option<usize> {
        self.rounds
    }

    /// Round count used for `n`-bit digests.
    pub fn rounds_for(&self, n: usize) -> usize {
        self.rounds.unwrap_or(n)
    }
}

impl fmt::Debug for HashKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HashKey")
            .field("k1_bits", &(self.k1.len() * 8))
            .field("k2_bits", &(self.k2.len() * 8))
            .field("rounds", &self.rounds)
            .finish()
    }
}

/// An inner keyed hash combined with a post-treatment update function.
#[derive(Clone, Debug)]
pub struct ChaoticHasher<H = HmacSha256> {
    inner: H,
    update: PostFunction,
}

impl ChaoticHasher<HmacSha256> {
    /// HMAC-SHA-256 followed by negation steps.
    pub fn new() -> Self {
        Self::with_inner(HmacSha256::new())
    }
}

impl Default for ChaoticHasher<HmacSha256> {
    fn default() -> Self {
        Self::new()
    }
}

impl<H: KeyedHash> ChaoticHasher<H> {
    pub fn with_inner(inner: H) -> Self {
        ChaoticHasher {
            inner,
            update: PostFunction::Negation,
        }
    }

    pub fn with_update(mut self, update: PostFunction) -> Self {
        self.update = update;
        self
    }

    /// Digest length in bits.
    pub fn n(&self) -> usize {
        self.inner.output_bits()
    }

    pub fn inner(&self) -> &H {
        &self.inner
    }

    pub fn update(&self) -> &PostFunction {
        &self.update
    }

    pub fn inner_hash(&self, key: &HashKey, message: &[u8]) -> Digest {
        self.inner.digest(key.k1(), message)
    }

    /// The `r` unary terms driving the post-treatment under `key`.
    pub fn strategy_for(&self, key: &HashKey) -> Vec<StrategyTerm> {
        let n = self.n();
        PrngTerms::new(key.k2(), n)
            .take(key.rounds_for(n))
            .collect()
    }

    pub fn hash(&self, key: &HashKey, message: &[u8]) -> Result<Digest> {
        self.hash_with_terms(key, message, &self.strategy_for(key))
    }

    pub(crate) fn hash_with_terms(
        &self,
        key: &HashKey,
        message: &[u8],
        terms: &[StrategyTerm],
    ) -> Result<Digest> {
        post_treatment(&self.inner_hash(key, message), terms, &self.update)
    }

    /// Recovers `h(k1, m)` from `H(k, m)`.
    pub fn recover_inner(&self, key: &HashKey, digest: &Digest) -> Result<Digest> {
        invert_post_treatment(digest, &self.strategy_for(key), &self.update)
    }
}

/// `H(k, m)` with HMAC-SHA-256 and negation steps.
pub fn chaotic_hash(key: &HashKey, message: &[u8]) -> Result<Digest> {
    ChaoticHasher::new().hash(key, message)
}
