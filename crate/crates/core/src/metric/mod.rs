//! The distance on the phase space of `G_f`:
//!
//! ```text
//! d((S, E), (T, F)) = d_e(E, F) + d_s(S, T)
//! d_e(E, F) = number of cells where E and F differ
//! d_s(S, T) = 9/N * sum_{k >= 1} |S^k - T^k| / 10^k
//! ```
//!
//! `S^1` is the head of the strategy. The series is truncated to `L` terms
//! and kept as an exact integer numerator over `N * 10^L`. No floating point
//! is involved.

mod verify;

pub use verify::{
    continuity_check, continuity_check_with, continuity_holds_for, divergence_profile,
    entropy_growth, entropy_growth_for, expansiveness_check_f0, log_slope, sensitivity_probe,
    ContinuityReport, ExpansivenessReport, SensitivityReport, MAX_ENTROPY_ARITY,
    MAX_ENTROPY_SEGMENT, MAX_EXPANSIVENESS_ARITY, MAX_EXPANSIVENESS_PERIOD, MAX_SENSITIVITY_ARITY,
};

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::iterate::SystemPoint;
use crate::state::StateVector;
use crate::strategy::Strategy;

pub const DEFAULT_PRECISION: u32 = 16;
/// Keeps `N * 10^L` inside `u128` for every supported `N`.
pub const MAX_PRECISION: u32 = 30;

fn pow10(e: u32) -> u128 {
    10u128.pow(e)
}

fn check_precision(precision: u32) -> Result<()> {
    if precision > MAX_PRECISION {
        return Err(Error::PrecisionTooLarge {
            precision,
            max: MAX_PRECISION,
        });
    }
    Ok(())
}

/// `integer_part + fractional_numerator / (n * 10^precision)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExactDistance {
    n: usize,
    precision: u32,
    integer_part: u64,
    fractional_numerator: u128,
}

impl ExactDistance {
    pub fn zero(n: usize, precision: u32) -> Self {
        ExactDistance {
            n,
            precision,
            integer_part: 0,
            fractional_numerator: 0,
        }
    }

    pub fn n_cells(&self) -> usize {
        self.n
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// The state component `d_e`, which is also `floor(d)`.
    pub fn integer_part(&self) -> u64 {
        self.integer_part
    }

    pub fn fractional_numerator(&self) -> u128 {
        self.fractional_numerator
    }

    pub fn denominator(&self) -> u128 {
        self.n as u128 * pow10(self.precision)
    }

    /// The whole distance as a single numerator over [`denominator`](Self::denominator).
    pub fn total_numerator(&self) -> u128 {
        self.integer_part as u128 * self.denominator() + self.fractional_numerator
    }

    pub fn is_zero(&self) -> bool {
        self.integer_part == 0 && self.fractional_numerator == 0
    }

    /// `d_s < 10^-k`. Requires `k <= precision`.
    pub fn fraction_below_pow10(&self, k: u32) -> bool {
        assert!(k <= self.precision, "k exceeds precision");
        self.fractional_numerator < self.n as u128 * pow10(self.precision - k)
    }

    /// `d_s >= 9 / (N * 10^k)`, the contribution of a difference of one at
    /// term `k`. Requires `1 <= k <= precision`.
    pub fn fraction_at_least_term(&self, k: u32) -> bool {
        assert!(k >= 1 && k <= self.precision, "k outside 1..=precision");
        self.fractional_numerator >= 9 * pow10(self.precision - k)
    }

    /// Approximate value for display.
    pub fn to_f64(&self) -> f64 {
        self.integer_part as f64 + self.fractional_numerator as f64 / self.denominator() as f64
    }

    fn comparable(&self, other: &Self) -> bool {
        self.n == other.n && self.precision == other.precision
    }
}

impl PartialOrd for ExactDistance {
    /// Distances are only comparable at the same arity and precision.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.comparable(other)
            .then(|| self.total_numerator().cmp(&other.total_numerator()))
    }
}

impl fmt::Display for ExactDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}+{}/{}",
            self.integer_part,
            self.fractional_numerator,
            self.denominator()
        )
    }
}

/// Number of differing cells.
pub fn hamming(e: &StateVector, f: &StateVector) -> Result<u64> {
    Ok(e.hamming(f)? as u64)
}

/// Numerator of `d_s(S, T)` truncated to `precision` terms, over `N * 10^precision`.
pub fn strategy_distance(s: &Strategy, t: &Strategy, precision: u32) -> Result<u128> {
    check_precision(precision)?;
    if s.n_cells() != t.n_cells() {
        return Err(Error::ArityMismatch {
            expected: s.n_cells(),
            found: t.n_cells(),
        });
    }
    let mut acc = 0u128;
    for k in 0..precision {
        let a = s.index(k as usize)?;
        let b = t.index(k as usize)?;
        acc += 9 * a.abs_diff(b) as u128 * pow10(precision - 1 - k);
    }
    Ok(acc)
}

pub fn distance(x: &SystemPoint, y: &SystemPoint, precision: u32) -> Result<ExactDistance> {
    let n = x.n_cells();
    if y.n_cells() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: y.n_cells(),
        });
    }
    Ok(ExactDistance {
        n,
        precision,
        integer_part: hamming(&x.state, &y.state)?,
        fractional_numerator: strategy_distance(&x.strategy, &y.strategy, precision)?,
    })
}
