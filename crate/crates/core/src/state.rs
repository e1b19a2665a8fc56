//! Fixed-length Boolean state vectors.
//!
//! Cells are 1-indexed. The canonical integer encoding puts cell 1 in the
//! least-significant bit, so `[x_1, x_2, x_3] = [1, 0, 0]` encodes to `1`.
//! Hexadecimal and byte renderings are big-endian: cell 1 is the low bit of
//! the last byte.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported number of cells.
pub const MAX_CELLS: usize = 4096;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateVector {
    len: usize,
    // bit (i - 1) of the little-endian word array holds cell i; unused high
    // bits of the last word stay zero
    words: Vec<u64>,
}

fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

fn check_len(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroArity);
    }
    if n > MAX_CELLS {
        return Err(Error::ArityTooLarge {
            arity: n,
            max: MAX_CELLS,
        });
    }
    Ok(())
}

impl StateVector {
    pub fn zeros(n: usize) -> Result<Self> {
        check_len(n)?;
        Ok(StateVector {
            len: n,
            words: vec![0; word_count(n)],
        })
    }

    pub fn ones(n: usize) -> Result<Self> {
        let mut v = Self::zeros(n)?;
        v.words.iter_mut().for_each(|w| *w = u64::MAX);
        v.mask_tail();
        Ok(v)
    }

    /// Builds a state from cell values listed in order `x_1, x_2, ...`.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let mut v = Self::zeros(bits.len())?;
        for (k, &b) in bits.iter().enumerate() {
            if b {
                v.words[k / 64] |= 1 << (k % 64);
            }
        }
        Ok(v)
    }

    /// Decodes the canonical integer encoding.
    pub fn from_index(n: usize, value: u64) -> Result<Self> {
        check_len(n)?;
        if n < 64 && value >> n != 0 {
            return Err(Error::ValueOutOfRange { value, n });
        }
        let mut v = Self::zeros(n)?;
        v.words[0] = value;
        Ok(v)
    }

    /// Canonical integer encoding, available for states of at most 64 cells.
    pub fn to_index(&self) -> Option<u64> {
        (self.len <= 64).then(|| self.words[0])
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Value of cell `i` (1-based).
    ///
    /// Panics if `i` is outside `1..=len`.
    pub fn get(&self, i: usize) -> bool {
        assert!(i >= 1 && i <= self.len, "cell {i} out of range");
        let k = i - 1;
        self.words[k / 64] >> (k % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i >= 1 && i <= self.len, "cell {i} out of range");
        let k = i - 1;
        if value {
            self.words[k / 64] |= 1 << (k % 64);
        } else {
            self.words[k / 64] &= !(1 << (k % 64));
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i >= 1 && i <= self.len, "cell {i} out of range");
        let k = i - 1;
        self.words[k / 64] ^= 1 << (k % 64);
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (1..=self.len).map(move |i| self.get(i))
    }

    /// Indices (1-based) of the cells equal to 1, ascending.
    pub fn ones_indices(&self) -> Vec<usize> {
        (1..=self.len).filter(|&i| self.get(i)).collect()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn complement(&self) -> Self {
        let mut v = self.clone();
        v.words.iter_mut().for_each(|w| *w = !*w);
        v.mask_tail();
        v
    }

    pub fn xor_assign(&mut self, other: &StateVector) -> Result<()> {
        self.same_len(other)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    pub fn xor(&self, other: &StateVector) -> Result<Self> {
        let mut v = self.clone();
        v.xor_assign(other)?;
        Ok(v)
    }

    /// Number of cells in which the two states differ.
    pub fn hamming(&self, other: &StateVector) -> Result<usize> {
        self.same_len(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    fn same_len(&self, other: &StateVector) -> Result<()> {
        if self.len != other.len {
            return Err(Error::ArityMismatch {
                expected: self.len,
                found: other.len,
            });
        }
        Ok(())
    }

    fn mask_tail(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << r) - 1;
        }
    }

    pub fn byte_len(&self) -> usize {
        self.len.div_ceil(8)
    }

    /// Big-endian bytes: cell 1 is the least-significant bit of the last byte.
    pub fn to_bytes(&self) -> Vec<u8> {
        let nb = self.byte_len();
        (0..nb)
            .map(|j| {
                // byte j counted from the end holds cells 8j+1 ..= 8j+8
                let b = nb - 1 - j;
                (self.words[b / 8] >> ((b % 8) * 8)) as u8
            })
            .collect()
    }

    /// Inverse of [`to_bytes`](Self::to_bytes). `bytes` must have exactly
    /// `ceil(n / 8)` entries with no bits set above cell `n`.
    pub fn from_bytes(n: usize, bytes: &[u8]) -> Result<Self> {
        let mut v = Self::zeros(n)?;
        if bytes.len() != v.byte_len() {
            return Err(Error::ArityMismatch {
                expected: v.byte_len() * 8,
                found: bytes.len() * 8,
            });
        }
        let nb = bytes.len();
        for (pos, &byte) in bytes.iter().enumerate() {
            let b = nb - 1 - pos;
            v.words[b / 8] |= (byte as u64) << ((b % 8) * 8);
        }
        let before = v.clone();
        v.mask_tail();
        if v != before {
            return Err(Error::ValueOutOfRange {
                value: bytes[0] as u64,
                n,
            });
        }
        Ok(v)
    }

    /// Lowercase hexadecimal of [`to_bytes`](Self::to_bytes).
    pub fn to_hex(&self) -> String {
        self.to_bytes().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Parses exactly `2 * ceil(n / 8)` hex digits (either case).
    pub fn from_hex(n: usize, text: &str) -> Result<Self> {
        check_len(n)?;
        let want = n.div_ceil(8) * 2;
        if text.len() != want || !text.is_ascii() {
            return Err(Error::BadHex(format!(
                "expected {want} hex digits for {n} cells, got {text:?}"
            )));
        }
        let bytes = (0..want / 2)
            .map(|k| u8::from_str_radix(&text[2 * k..2 * k + 2], 16))
            .collect::<std::result::Result<Vec<u8>, _>>()
            .map_err(|_| Error::BadHex(text.to_string()))?;
        Self::from_bytes(n, &bytes)
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, b) in self.bits().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", b as u8)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}
