//! Strategies: the sequences of update directives that drive chaotic
//! iterations.
//!
//! A [`Strategy`] is an immutable value. [`Strategy::shift`] returns a new
//! strategy sharing the same storage, so iterating never disturbs the
//! original. Terms are consumed from position 0; the first term applied to
//! `x^0` is `head()`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrategyTerm {
    /// Update the single cell `i` (1-based).
    Unary(usize),
    /// Update every cell in the set. Indices are sorted and distinct.
    Subset(Vec<usize>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TermKind {
    Unary,
    Subset,
}

impl StrategyTerm {
    pub fn subset(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        StrategyTerm::Subset(v)
    }

    pub fn kind(&self) -> TermKind {
        match self {
            StrategyTerm::Unary(_) => TermKind::Unary,
            StrategyTerm::Subset(_) => TermKind::Subset,
        }
    }

    pub fn as_unary(&self) -> Option<usize> {
        match self {
            StrategyTerm::Unary(i) => Some(*i),
            StrategyTerm::Subset(_) => None,
        }
    }

    /// `Unary(i)` becomes `Subset({i})`; subsets are returned unchanged.
    pub fn to_subset(&self) -> StrategyTerm {
        match self {
            StrategyTerm::Unary(i) => StrategyTerm::Subset(vec![*i]),
            s => s.clone(),
        }
    }

    /// `Subset({i})` becomes `Unary(i)`; other subsets have no unary form.
    pub fn to_unary(&self) -> Option<StrategyTerm> {
        match self {
            StrategyTerm::Unary(_) => Some(self.clone()),
            StrategyTerm::Subset(s) if s.len() == 1 => Some(StrategyTerm::Unary(s[0])),
            StrategyTerm::Subset(_) => None,
        }
    }

    /// Checks every index lies in `1..=n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |i: usize| i == 0 || i > n;
        match self {
            StrategyTerm::Unary(i) if bad(*i) => Err(Error::IndexOutOfRange { index: *i, n }),
            StrategyTerm::Subset(s) => match s.iter().find(|&&i| bad(i)) {
                Some(&i) => Err(Error::IndexOutOfRange { index: i, n }),
                None => Ok(()),
            },
            _ => Ok(()),
        }
    }
}

impl fmt::Display for StrategyTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyTerm::Unary(i) => write!(f, "{i}"),
            StrategyTerm::Subset(s) if s.is_empty() => write!(f, "-"),
            StrategyTerm::Subset(s) => {
                let parts: Vec<String> = s.iter().map(|i| i.to_string()).collect();
                write!(f, "{}", parts.join("+"))
            }
        }
    }
}

/// An unbounded (or externally bounded) supplier of strategy terms, indexed
/// from 0. Implementations must be pure: the same `k` always yields the same
/// term.
pub trait TermSource: Send + Sync {
    fn term(&self, k: usize) -> Option<StrategyTerm>;
}

impl<F> TermSource for F
where
    F: Fn(usize) -> Option<StrategyTerm> + Send + Sync,
{
    fn term(&self, k: usize) -> Option<StrategyTerm> {
        self(k)
    }
}

#[derive(Clone)]
pub struct Strategy {
    n: usize,
    kind: TermKind,
    prefix: Arc<[StrategyTerm]>,
    offset: usize,
    source: Option<Arc<dyn TermSource>>,
}

impl Strategy {
    fn build(
        n: usize,
        kind: TermKind,
        prefix: Vec<StrategyTerm>,
        source: Option<Arc<dyn TermSource>>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroArity);
        }
        for t in &prefix {
            if t.kind() != kind {
                return Err(Error::TermKindMismatch);
            }
            t.validate(n)?;
        }
        Ok(Strategy {
            n,
            kind,
            prefix: prefix.into(),
            offset: 0,
            source,
        })
    }

    /// A finite unary strategy.
    pub fn unary(n: usize, indices: &[usize]) -> Result<Self> {
        let terms = indices.iter().map(|&i| StrategyTerm::Unary(i)).collect();
        Self::build(n, TermKind::Unary, terms, None)
    }

    /// A finite subset strategy.
    pub fn subsets<I, S>(n: usize, sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = usize>,
    {
        let terms = sets.into_iter().map(StrategyTerm::subset).collect();
        Self::build(n, TermKind::Subset, terms, None)
    }

    /// A finite strategy from explicit terms, which must share one kind.
    pub fn from_terms(n: usize, kind: TermKind, terms: Vec<StrategyTerm>) -> Result<Self> {
        Self::build(n, kind, terms, None)
    }

    pub fn empty(n: usize, kind: TermKind) -> Result<Self> {
        Self::build(n, kind, Vec::new(), None)
    }

    /// `prefix` followed by the terms of `source`.
    pub fn with_source(
        n: usize,
        kind: TermKind,
        prefix: Vec<StrategyTerm>,
        source: Arc<dyn TermSource>,
    ) -> Result<Self> {
        Self::build(n, kind, prefix, Some(source))
    }

    /// The infinite strategy repeating `period` forever.
    pub fn periodic(n: usize, kind: TermKind, period: Vec<StrategyTerm>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidParameter("empty period".into()));
        }
        let checked = Self::build(n, kind, period, None)?;
        let terms = checked.prefix.clone();
        let source = move |k: usize| Some(terms[k % terms.len()].clone());
        Self::build(n, kind, Vec::new(), Some(Arc::new(source)))
    }

    /// `prefix` followed by the remaining terms of `tail`.
    pub fn then(prefix: Vec<StrategyTerm>, tail: Strategy) -> Result<Self> {
        let (n, kind) = (tail.n, tail.kind);
        Self::build(n, kind, prefix, Some(Arc::new(tail)))
    }

    pub fn n_cells(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> TermKind {
        self.kind
    }

    /// Number of terms consumed by shifting since construction.
    pub fn consumed(&self) -> usize {
        self.offset
    }

    /// Term `k` of the current strategy (0 is the head), validated against
    /// the strategy's arity and kind.
    pub fn term(&self, k: usize) -> Result<StrategyTerm> {
        let abs = self.offset + k;
        let term = if abs < self.prefix.len() {
            self.prefix[abs].clone()
        } else {
            self.source
                .as_ref()
                .and_then(|s| s.term(abs - self.prefix.len()))
                .ok_or(Error::StrategyExhausted { position: abs })?
        };
        if term.kind() != self.kind {
            return Err(Error::TermKindMismatch);
        }
        term.validate(self.n)?;
        Ok(term)
    }

    /// Term `k` as a unary index.
    pub fn index(&self, k: usize) -> Result<usize> {
        self.term(k)?.as_unary().ok_or(Error::TermKindMismatch)
    }

    /// The initial function: the first term, without consuming it.
    pub fn head(&self) -> Result<StrategyTerm> {
        self.term(0)
    }

    /// The shift: the same strategy with its first term removed.
    pub fn shift(&self) -> Result<Strategy> {
        self.head()?;
        Ok(self.advance(1))
    }

    // callers guarantee `count` terms exist or do not care
    pub(crate) fn advance(&self, count: usize) -> Strategy {
        let mut s = self.clone();
        s.offset += count;
        s
    }

    /// The first `count` terms.
    pub fn take(&self, count: usize) -> Result<Vec<StrategyTerm>> {
        (0..count).map(|k| self.term(k)).collect()
    }

    /// Terms left in a strategy without a source; `None` when unbounded.
    pub fn remaining(&self) -> Option<usize> {
        match self.source {
            None => Some(self.prefix.len().saturating_sub(self.offset)),
            Some(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.source.is_none()
    }

    /// The same strategy with unary terms rewritten as singleton subsets.
    pub fn to_subsets(&self) -> Strategy {
        if self.kind == TermKind::Subset {
            return self.clone();
        }
        let inner = self.clone();
        let source = move |k: usize| inner.term(k).ok().map(|t| t.to_subset());
        Strategy {
            n: self.n,
            kind: TermKind::Subset,
            prefix: Vec::new().into(),
            offset: 0,
            source: Some(Arc::new(source)),
        }
    }
}

impl TermSource for Strategy {
    fn term(&self, k: usize) -> Option<StrategyTerm> {
        Strategy::term(self, k).ok()
    }
}

impl fmt::Debug for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self.prefix[self.offset.min(self.prefix.len())..]
            .iter()
            .map(|t| t.to_string())
            .collect();
        write!(f, "Strategy(n={}, [{}", self.n, shown.join(","))?;
        if self.source.is_some() {
            write!(f, ", ...")?;
        }
        write!(f, "])")
    }
}

/// Free-function form of [`Strategy::shift`].
pub fn shift(s: &Strategy) -> Result<Strategy> {
    s.shift()
}

/// Free-function form of [`Strategy::head`].
pub fn head(s: &Strategy) -> Result<StrategyTerm> {
    s.head()
}
