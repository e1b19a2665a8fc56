//! Update functions `f: B^N -> B^N`.

use std::fmt;

use crate::error::{Error, Result};
use crate::state::StateVector;

/// Largest arity stored as an explicit truth table (2^24 entries).
pub const MAX_TABLE_ARITY: usize = 24;

/// A total map on Boolean state vectors of a fixed arity.
pub trait BooleanMap {
    fn arity(&self) -> usize;

    fn apply(&self, x: &StateVector) -> StateVector;

    /// Cell `i` of `f(x)`.
    fn component(&self, x: &StateVector, i: usize) -> bool {
        self.apply(x).get(i)
    }
}

/// An update function stored as a truth table over canonical encodings.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UpdateFunction {
    arity: usize,
    table: Vec<u32>,
}

fn check_table_arity(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroArity);
    }
    if n > MAX_TABLE_ARITY {
        return Err(Error::ArityTooLarge {
            arity: n,
            max: MAX_TABLE_ARITY,
        });
    }
    Ok(())
}

impl UpdateFunction {
    /// `table[e]` is the encoding of `f(state(e))`.
    pub fn from_table(n: usize, table: Vec<u32>) -> Result<Self> {
        check_table_arity(n)?;
        if table.len() != 1 << n {
            return Err(Error::InvalidParameter(format!(
                "truth table for arity {n} needs {} entries, got {}",
                1usize << n,
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&v| v >> n != 0) {
            return Err(Error::ValueOutOfRange {
                value: bad as u64,
                n,
            });
        }
        Ok(UpdateFunction { arity: n, table })
    }

    /// Tabulates `map` over all encodings. Results are masked to `n` bits.
    pub fn from_fn(n: usize, map: impl Fn(u32) -> u32) -> Result<Self> {
        check_table_arity(n)?;
        let mask = ((1u64 << n) - 1) as u32;
        let table = (0..1u32 << n).map(|e| map(e) & mask).collect();
        Ok(UpdateFunction { arity: n, table })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |e| e)
    }

    pub fn constant(n: usize, value: u32) -> Result<Self> {
        Self::from_fn(n, |_| value)
    }

    /// Vectorial negation `f_0(x)_i = !x_i`.
    pub fn negation(n: usize) -> Result<Self> {
        Self::from_fn(n, |e| !e)
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    /// `f` applied to an encoded state.
    pub fn image(&self, e: u32) -> u32 {
        self.table[e as usize]
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.table.len()];
        self.table
            .iter()
            .all(|&v| !std::mem::replace(&mut seen[v as usize], true))
    }

    fn encode(&self, x: &StateVector) -> u32 {
        assert_eq!(x.len(), self.arity, "arity mismatch");
        x.to_index().expect("table arity fits in 64 bits") as u32
    }
}

/// Builds the vectorial negation `f_0` on `n` cells.
pub fn make_negation(n: usize) -> Result<UpdateFunction> {
    UpdateFunction::negation(n)
}

impl BooleanMap for UpdateFunction {
    fn arity(&self) -> usize {
        self.arity
    }

    fn apply(&self, x: &StateVector) -> StateVector {
        let e = self.encode(x);
        StateVector::from_index(self.arity, self.image(e) as u64).expect("table entry in range")
    }

    fn component(&self, x: &StateVector, i: usize) -> bool {
        self.image(self.encode(x)) >> (i - 1) & 1 == 1
    }
}

impl fmt::Debug for UpdateFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arity <= 4 {
            f.debug_struct("UpdateFunction")
                .field("arity", &self.arity)
                .field("table", &self.table)
                .finish()
        } else {
            f.debug_struct("UpdateFunction")
                .field("arity", &self.arity)
                .finish_non_exhaustive()
        }
    }
}

/// Vectorial negation without a stored table, for large arities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Negation {
    pub n: usize,
}

impl BooleanMap for Negation {
    fn arity(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &StateVector) -> StateVector {
        x.complement()
    }

    fn component(&self, x: &StateVector, i: usize) -> bool {
        !x.get(i)
    }
}

/// Adapts a closure computing `f(x)` into a [`BooleanMap`].
pub struct FnMap<F> {
    n: usize,
    map: F,
}

impl<F: Fn(&StateVector) -> StateVector> FnMap<F> {
    pub fn new(n: usize, map: F) -> Self {
        FnMap { n, map }
    }
}

impl<F: Fn(&StateVector) -> StateVector> BooleanMap for FnMap<F> {
    fn arity(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &StateVector) -> StateVector {
        (self.map)(x)
    }
}
