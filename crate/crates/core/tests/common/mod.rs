//! Oracles shared by the integration tests. None of these reuse the library's
//! graph or counting code paths.

#![allow(dead_code)]

use std::collections::BTreeSet;

use chaotic_iterations::hash::{Digest, KeyedHash};
use chaotic_iterations::{StateVector, UpdateFunction};

/// Strong connectivity of `Γ(f)` from the full reachability relation: every
/// vertex must reach every other one. Reachability sets are grown by
/// repeated relaxation over bit masks of vertices, independent of any SCC
/// routine. Supports `N <= 3` (at most 8 vertices, one byte per set).
pub fn strongly_connected_by_reachability(n: usize, table: &[u32]) -> bool {
    let size = 1usize << n;
    assert!(size <= 64);
    let mut reach: Vec<u64> = (0..size).map(|v| 1u64 << v).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for v in 0..size {
            let fv = table[v] as usize;
            let mut acc = reach[v];
            for i in 0..n {
                let w = (v & !(1 << i)) | (fv & (1 << i));
                acc |= reach[w];
            }
            if acc != reach[v] {
                reach[v] = acc;
                changed = true;
            }
        }
    }
    let all = if size == 64 {
        u64::MAX
    } else {
        (1u64 << size) - 1
    };
    reach.iter().all(|&r| r == all)
}

/// Truth table for function number `index` in the enumeration order (entry e
/// taken from bits `N*e ..`).
pub fn table_of(n: usize, index: u64) -> Vec<u32> {
    let mask = (1u64 << n) - 1;
    (0..1usize << n)
        .map(|e| ((index >> (n * e)) & mask) as u32)
        .collect()
}

/// Distinct state sequences `(x^0, ..., x^{k-1})` of `G_f`, collected by
/// walking every initial state and every unary strategy of length `k - 1`.
pub fn brute_force_segments(f: &UpdateFunction, k: usize) -> usize {
    let n = f.table().len().trailing_zeros() as usize;
    let mut seen = BTreeSet::new();
    let strategies = n.pow((k - 1) as u32);
    for x0 in 0..1u32 << n {
        for code in 0..strategies {
            let mut c = code;
            let mut x = x0;
            let mut seg = vec![x];
            for _ in 1..k {
                let i = c % n;
                c /= n;
                let bit = 1u32 << i;
                x = (x & !bit) | (f.image(x) & bit);
                seg.push(x);
            }
            seen.insert(seg);
        }
    }
    seen.len()
}

/// Conjugates `f` by a relabeling of cells: cell `i` of the input becomes
/// cell `perm[i]`.
pub fn conjugate(f: &UpdateFunction, perm: &[usize]) -> UpdateFunction {
    let n = perm.len();
    let forward = |e: u32| -> u32 { (0..n).map(|i| ((e >> i) & 1) << perm[i]).sum() };
    let backward = |e: u32| -> u32 { (0..n).map(|i| ((e >> perm[i]) & 1) << i).sum() };
    UpdateFunction::from_fn(n, |e| forward(f.image(backward(e)))).unwrap()
}

/// A deliberately weak 8-bit keyed hash (Pearson hashing over a key-derived
/// permutation). Collides constantly, which is what the collision-partition
/// checks need.
#[derive(Clone)]
pub struct ToyHash8;

impl ToyHash8 {
    fn permutation(key: &[u8]) -> [u8; 256] {
        let mut t = [0u8; 256];
        for (i, v) in t.iter_mut().enumerate() {
            *v = i as u8;
        }
        let mut j = 0u8;
        for i in 0..256 {
            j = j
                .wrapping_add(t[i])
                .wrapping_add(key.get(i % key.len().max(1)).copied().unwrap_or(0));
            t.swap(i, j as usize);
        }
        t
    }
}

impl KeyedHash for ToyHash8 {
    fn output_bits(&self) -> usize {
        8
    }

    fn digest(&self, key: &[u8], message: &[u8]) -> Digest {
        let t = Self::permutation(key);
        let mut h = t[message.len() & 0xff];
        for &b in message {
            h = t[(h ^ b) as usize];
        }
        Digest::from_state(StateVector::from_bytes(8, &[h]).unwrap())
    }
}
