//! Chaotic iterations: the subset form, where each step updates the cells
//! of a set `S^n` to the values of `f(x)`, and the dynamical-system form
//! `G_f(S, E) = (shift(S), F_f(head(S), E))` on unary strategies.

use crate::error::{Error, Result};
use crate::function::BooleanMap;
use crate::state::StateVector;
use crate::strategy::{Strategy, StrategyTerm, TermKind};

fn check_arity<F: BooleanMap + ?Sized>(f: &F, x: &StateVector) -> Result<()> {
    if f.arity() != x.len() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            found: x.len(),
        });
    }
    Ok(())
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    Ok(())
}

/// `F_f(i, E)`: replaces cell `i` of `E` with `f(E)_i`.
pub fn ff_step<F: BooleanMap + ?Sized>(f: &F, i: usize, e: &StateVector) -> Result<StateVector> {
    check_arity(f, e)?;
    check_index(i, e.len())?;
    let mut out = e.clone();
    out.set(i, f.component(e, i));
    Ok(out)
}

/// One step of subset chaotic iterations: cells listed in `subset` take
/// their value in `f(x)`, all other cells are kept.
pub fn ci_step_subset<F: BooleanMap + ?Sized>(
    f: &F,
    x: &StateVector,
    subset: &[usize],
) -> Result<StateVector> {
    check_arity(f, x)?;
    for &i in subset {
        check_index(i, x.len())?;
    }
    let mut out = x.clone();
    match subset.len() {
        0 => {}
        1 => out.set(subset[0], f.component(x, subset[0])),
        _ => {
            let fx = f.apply(x);
            for &i in subset {
                out.set(i, fx.get(i));
            }
        }
    }
    Ok(out)
}

/// Applies one term of either kind.
pub fn ci_step<F: BooleanMap + ?Sized>(
    f: &F,
    x: &StateVector,
    term: &StrategyTerm,
) -> Result<StateVector> {
    match term {
        StrategyTerm::Unary(i) => ff_step(f, *i, x),
        StrategyTerm::Subset(s) => ci_step_subset(f, x, s),
    }
}

/// A point `(S, E)` of the phase space of `G_f`.
#[derive(Clone, Debug)]
pub struct SystemPoint {
    pub strategy: Strategy,
    pub state: StateVector,
}

impl SystemPoint {
    pub fn new(strategy: Strategy, state: StateVector) -> Result<Self> {
        if strategy.n_cells() != state.len() {
            return Err(Error::ArityMismatch {
                expected: strategy.n_cells(),
                found: state.len(),
            });
        }
        if strategy.kind() != TermKind::Unary {
            return Err(Error::TermKindMismatch);
        }
        Ok(SystemPoint { strategy, state })
    }

    pub fn n_cells(&self) -> usize {
        self.state.len()
    }
}

/// `G_f(S, E) = (shift(S), F_f(head(S), E))`.
pub fn gf_step<F: BooleanMap + ?Sized>(p: &SystemPoint, f: &F) -> Result<SystemPoint> {
    let i = p
        .strategy
        .head()?
        .as_unary()
        .ok_or(Error::TermKindMismatch)?;
    let state = ff_step(f, i, &p.state)?;
    Ok(SystemPoint {
        strategy: p.strategy.advance(1),
        state,
    })
}

/// `G_f` iterated `m` times.
pub fn gf_iterate<F: BooleanMap + ?Sized>(p: &SystemPoint, f: &F, m: usize) -> Result<SystemPoint> {
    let mut q = p.clone();
    for _ in 0..m {
        q = gf_step(&q, f)?;
    }
    Ok(q)
}

/// The states `x^0, ..., x^k` of the chaotic iterations `(f, (x0, s))`.
/// Term `t` of `s` (0-based) produces `x^{t+1}`.
pub fn trajectory<F: BooleanMap + ?Sized>(
    f: &F,
    x0: &StateVector,
    s: &Strategy,
    k: usize,
) -> Result<Vec<StateVector>> {
    check_arity(f, x0)?;
    if s.n_cells() != x0.len() {
        return Err(Error::ArityMismatch {
            expected: x0.len(),
            found: s.n_cells(),
        });
    }
    let mut out = Vec::with_capacity(k + 1);
    out.push(x0.clone());
    for t in 0..k {
        let term = s.term(t)?;
        let next = ci_step(f, &out[t], &term)?;
        out.push(next);
    }
    Ok(out)
}
