//! The chaotic-iteration post-treatment of a digest and its inverse.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::Digest;
use crate::error::{Error, HashError, Result};
use crate::function::{BooleanMap, UpdateFunction};
use crate::iterate::ci_step;
use crate::state::StateVector;
use crate::strategy::StrategyTerm;

/// Largest digest length for which a tabulated update function is certified
/// by exhaustively checking that each step is a permutation.
pub const MAX_EXHAUSTIVE_CERTIFICATION: usize = 12;

type Coupling = dyn Fn(&StateVector, usize) -> bool + Send + Sync;

/// `f(x)_i = x_i XOR g(x', i)`, where `x'` is `x` with cell `i` cleared.
///
/// Because `g` never sees cell `i`, each unary step `F_f(i, .)` is its own
/// inverse.
#[derive(Clone)]
pub struct XorCoupled {
    n: usize,
    g: Arc<Coupling>,
}

impl XorCoupled {
    pub fn new(n: usize, g: impl Fn(&StateVector, usize) -> bool + Send + Sync + 'static) -> Self {
        XorCoupled { n, g: Arc::new(g) }
    }
}

impl BooleanMap for XorCoupled {
    fn arity(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &StateVector) -> StateVector {
        let mut out = x.clone();
        for i in 1..=self.n {
            out.set(i, self.component(x, i));
        }
        out
    }

    fn component(&self, x: &StateVector, i: usize) -> bool {
        let mut masked = x.clone();
        masked.set(i, false);
        x.get(i) ^ (self.g)(&masked, i)
    }
}

/// The update function `f` used by the post-treatment.
#[derive(Clone, Default)]
pub enum PostFunction {
    /// Vectorial negation at any digest length.
    #[default]
    Negation,
    /// An explicit truth table of arity `n`.
    Table(UpdateFunction),
    XorCoupled(XorCoupled),
}

impl fmt::Debug for PostFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PostFunction::Negation => write!(f, "Negation"),
            PostFunction::Table(t) => f.debug_tuple("Table").field(t).finish(),
            PostFunction::XorCoupled(x) => write!(f, "XorCoupled(n={})", x.n),
        }
    }
}

impl PostFunction {
    fn check_arity(&self, n: usize) -> Result<()> {
        let arity = match self {
            PostFunction::Negation => return Ok(()),
            PostFunction::Table(t) => t.arity(),
            PostFunction::XorCoupled(x) => x.n,
        };
        if arity != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: arity,
            });
        }
        Ok(())
    }
}

fn apply_negation(x: &mut StateVector, term: &StrategyTerm) {
    match term {
        StrategyTerm::Unary(i) => x.flip(*i),
        StrategyTerm::Subset(s) => s.iter().for_each(|&i| x.flip(i)),
    }
}

fn validate_terms(terms: &[StrategyTerm], n: usize) -> Result<()> {
    terms.iter().try_for_each(|t| t.validate(n))
}

/// Applies one chaotic-iteration step per term to the digest.
pub fn post_treatment(x: &Digest, terms: &[StrategyTerm], f: &PostFunction) -> Result<Digest> {
    let n = x.len();
    f.check_arity(n)?;
    validate_terms(terms, n)?;
    let mut state = x.as_state().clone();
    for term in terms {
        state = match f {
            PostFunction::Negation => {
                apply_negation(&mut state, term);
                state
            }
            PostFunction::Table(t) => ci_step(t, &state, term)?,
            PostFunction::XorCoupled(c) => ci_step(c, &state, term)?,
        };
    }
    Ok(Digest::from_state(state))
}

/// Step maps of a tabulated function, inverted, keyed by term.
fn inverse_step_tables(
    f: &UpdateFunction,
    terms: &[StrategyTerm],
) -> Result<HashMap<StrategyTerm, Vec<u32>>> {
    let n = f.arity();
    let mut out = HashMap::new();
    for term in terms {
        if out.contains_key(term) {
            continue;
        }
        let mask: u32 = match term {
            StrategyTerm::Unary(i) => 1 << (i - 1),
            StrategyTerm::Subset(s) => s.iter().map(|i| 1u32 << (i - 1)).sum(),
        };
        let mut inverse = vec![u32::MAX; 1 << n];
        for e in 0..1u32 << n {
            let image = (e & !mask) | (f.image(e) & mask);
            if inverse[image as usize] != u32::MAX {
                return Err(HashError::NotCertified(format!(
                    "step {term} maps two digests to {image:#x}"
                ))
                .into());
            }
            inverse[image as usize] = e;
        }
        out.insert(term.clone(), inverse);
    }
    Ok(out)
}

/// Checks that the post-treatment with `f` and `terms` can be inverted on
/// `n`-bit digests.
///
/// * Negation is always certified.
/// * A truth table is certified for `n <= 12` when every step map is a
///   permutation of `B^n`, checked exhaustively.
/// * A [`XorCoupled`] function is certified for unary terms and for subsets
///   of at most one cell.
pub fn certify(f: &PostFunction, n: usize, terms: &[StrategyTerm]) -> Result<()> {
    f.check_arity(n)?;
    validate_terms(terms, n)?;
    match f {
        PostFunction::Negation => Ok(()),
        PostFunction::Table(t) => {
            if n > MAX_EXHAUSTIVE_CERTIFICATION {
                return Err(HashError::NotCertified(format!(
                    "tabulated functions are certified only up to n = {MAX_EXHAUSTIVE_CERTIFICATION}"
                ))
                .into());
            }
            inverse_step_tables(t, terms).map(|_| ())
        }
        PostFunction::XorCoupled(_) => {
            match terms
                .iter()
                .find(|t| matches!(t, StrategyTerm::Subset(s) if s.len() > 1))
            {
                Some(t) => Err(HashError::NotCertified(format!(
                    "simultaneous update {t} of an xor-coupled function"
                ))
                .into()),
                None => Ok(()),
            }
        }
    }
}

/// The unique `x` with `post_treatment(x, terms, f) == y`.
pub fn invert_post_treatment(
    y: &Digest,
    terms: &[StrategyTerm],
    f: &PostFunction,
) -> Result<Digest> {
    let n = y.len();
    certify(f, n, terms)?;
    let mut state = y.as_state().clone();
    match f {
        PostFunction::Negation => {
            for term in terms.iter().rev() {
                apply_negation(&mut state, term);
            }
        }
        PostFunction::XorCoupled(c) => {
            for term in terms.iter().rev() {
                state = ci_step(c, &state, term)?;
            }
        }
        PostFunction::Table(t) => {
            let inverses = inverse_step_tables(t, terms)?;
            let mut e = state.to_index().expect("n <= 12") as u32;
            for term in terms.iter().rev() {
                e = inverses[term][e as usize];
            }
            state = StateVector::from_index(n, e as u64)?;
        }
    }
    Ok(Digest::from_state(state))
}
