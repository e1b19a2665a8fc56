use hmac::{Hmac, Mac};
use sha2::Sha256;

use super::Digest;
use crate::error::{HashError, Result};
use crate::state::StateVector;

/// A keyed hash `h(k, m)` with a fixed output length.
pub trait KeyedHash: Send + Sync {
    fn output_bits(&self) -> usize;

    fn digest(&self, key: &[u8], message: &[u8]) -> Digest;
}

/// HMAC-SHA-256, optionally truncated to its leftmost `bits` bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HmacSha256 {
    bits: usize,
}

impl HmacSha256 {
    pub const FULL_BITS: usize = 256;

    pub fn new() -> Self {
        HmacSha256 {
            bits: Self::FULL_BITS,
        }
    }

    /// `bits` must be a multiple of 8 in `8..=256`.
    pub fn truncated(bits: usize) -> Result<Self> {
        if bits == 0 || bits > Self::FULL_BITS || !bits.is_multiple_of(8) {
            return Err(HashError::UnsupportedLength(bits).into());
        }
        Ok(HmacSha256 { bits })
    }
}

impl Default for HmacSha256 {
    fn default() -> Self {
        Self::new()
    }
}

impl KeyedHash for HmacSha256 {
    fn output_bits(&self) -> usize {
        self.bits
    }

    fn digest(&self, key: &[u8], message: &[u8]) -> Digest {
        let mut mac = Hmac::<Sha256>::new_from_slice(key).expect("HMAC accepts any key length");
        mac.update(message);
        let out = mac.finalize().into_bytes();
        let bits = StateVector::from_bytes(self.bits, &out[..self.bits / 8])
            .expect("byte count matches length");
        Digest::from_state(bits)
    }
}

/// `h(k1, m)` with the default HMAC-SHA-256 construction.
pub fn inner_hash(k1: &[u8], message: &[u8]) -> Digest {
    HmacSha256::new().digest(k1, message)
}
