//! Bounded, finite checks of the quantitative chaos properties of `G_f`.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{distance, ExactDistance};
use crate::error::{Error, Result};
use crate::function::{BooleanMap, UpdateFunction};
use crate::iterate::{gf_iterate, gf_step, SystemPoint};
use crate::par::{self, Execution};
use crate::state::StateVector;
use crate::strategy::{Strategy, StrategyTerm, TermKind};

pub const MAX_SENSITIVITY_ARITY: usize = 16;
pub const MAX_EXPANSIVENESS_ARITY: usize = 3;
pub const MAX_EXPANSIVENESS_PERIOD: usize = 4;
pub const MAX_ENTROPY_ARITY: usize = 3;
pub const MAX_ENTROPY_SEGMENT: usize = 10;

/// Extra random strategy terms drawn past the agreeing prefix in continuity trials.
const CONTINUITY_TAIL: usize = 4;

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn random_state(rng: &mut impl Rng, n: usize) -> StateVector {
    let bits: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    StateVector::from_bits(&bits).expect("n >= 1")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuityReport {
    pub trials: usize,
    pub depth: usize,
    pub violations: usize,
    pub first_violation: Option<usize>,
}

impl ContinuityReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Checks the continuity property on one pair: `x` and `y` must share their
/// state and the first `k + 1` strategy terms; their images must then share
/// their state and first `k` terms, so that `d(G_f(x), G_f(y)) < 10^-k`.
pub fn continuity_holds_for<F: BooleanMap + ?Sized>(
    f: &F,
    x: &SystemPoint,
    y: &SystemPoint,
    k: usize,
) -> Result<bool> {
    if k == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    let precision = u32::try_from(k).map_err(|_| Error::InvalidParameter("depth".into()))?;
    let before = distance(x, y, precision + 1)?;
    if !before.is_zero() {
        return Err(Error::InvalidParameter(
            "points must share their state and first k + 1 terms".into(),
        ));
    }
    let fx = gf_step(x, f)?;
    let fy = gf_step(y, f)?;
    let after = distance(&fx, &fy, precision)?;
    Ok(after.is_zero() && after.fraction_below_pow10(precision))
}

/// Random-pair continuity check with the default execution mode.
pub fn continuity_check<F: BooleanMap + Sync + ?Sized>(
    f: &F,
    trials: usize,
    k: usize,
    seed: u64,
) -> Result<ContinuityReport> {
    continuity_check_with(f, trials, k, seed, Execution::default())
}

pub fn continuity_check_with<F: BooleanMap + Sync + ?Sized>(
    f: &F,
    trials: usize,
    k: usize,
    seed: u64,
    exec: Execution,
) -> Result<ContinuityReport> {
    if k == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    let n = f.arity();
    let len = k + 1 + CONTINUITY_TAIL;
    let outcomes = par::map_indexed(exec, trials, |t| -> Result<bool> {
        let mut rng = trial_rng(seed, t);
        let state = random_state(&mut rng, n);
        let s: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=n)).collect();
        let mut u = s.clone();
        for v in &mut u[k + 1..] {
            *v = rng.gen_range(1..=n);
        }
        let x = SystemPoint::new(Strategy::unary(n, &s)?, state.clone())?;
        let y = SystemPoint::new(Strategy::unary(n, &u)?, state)?;
        continuity_holds_for(f, &x, &y, k)
    });
    let mut violations = 0;
    let mut first_violation = None;
    for (t, outcome) in outcomes.into_iter().enumerate() {
        if !outcome? {
            violations += 1;
            first_violation.get_or_insert(t);
        }
    }
    Ok(ContinuityReport {
        trials,
        depth: k,
        violations,
        first_violation,
    })
}

/// `d(G^m(p), G^m(q))` for `m = 0..=horizon`.
pub fn divergence_profile<F: BooleanMap + ?Sized>(
    f: &F,
    p: &SystemPoint,
    q: &SystemPoint,
    horizon: usize,
    precision: u32,
) -> Result<Vec<ExactDistance>> {
    let (mut a, mut b) = (p.clone(), q.clone());
    let mut out = Vec::with_capacity(horizon + 1);
    for m in 0..=horizon {
        if m > 0 {
            a = gf_step(&a, f)?;
            b = gf_step(&b, f)?;
        }
        out.push(distance(&a, &b, precision)?);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SensitivityReport {
    /// Largest `d(G^m(p), G^m(q))` found over `m <= horizon`.
    pub max_distance: ExactDistance,
    /// The iteration count `m` at which it was reached.
    pub step: usize,
    /// The perturbed point `q`.
    pub witness: SystemPoint,
    /// `d(p, q)`, below `10^-k`.
    pub initial_distance: ExactDistance,
}

/// Searches points `q` that share `p`'s state and first `k` strategy terms
/// and maximises `d(G^m(p), G^m(q))` over `m <= horizon`.
///
/// The search is exact on the state component: after the shared prefix, the
/// reachable states of `q` at each step are enumerated layer by layer in
/// `Γ(f)`. The witness re-joins `p`'s strategy right after the chosen step.
/// `p`'s strategy must supply `horizon + precision` terms.
pub fn sensitivity_probe(
    f: &UpdateFunction,
    p: &SystemPoint,
    k: usize,
    horizon: usize,
    precision: u32,
) -> Result<SensitivityReport> {
    let n = f.arity();
    if n != p.n_cells() {
        return Err(Error::ArityMismatch {
            expected: n,
            found: p.n_cells(),
        });
    }
    if n > MAX_SENSITIVITY_ARITY {
        return Err(Error::ScaleLimit(format!(
            "sensitivity probe supports N <= {MAX_SENSITIVITY_ARITY}"
        )));
    }
    if horizon < k {
        return Err(Error::InvalidParameter("horizon must be at least k".into()));
    }
    let precision_k = u32::try_from(k).map_err(|_| Error::InvalidParameter("k".into()))?;
    if precision_k > precision {
        return Err(Error::InvalidParameter(
            "k must not exceed the precision".into(),
        ));
    }

    let mut p_states = Vec::with_capacity(horizon + 1);
    let mut cur = p.clone();
    p_states.push(cur.state.to_index().unwrap() as u32);
    for _ in 0..horizon {
        cur = gf_step(&cur, f)?;
        p_states.push(cur.state.to_index().unwrap() as u32);
    }

    const UNSEEN: u32 = u32::MAX;
    let size = 1usize << n;
    let start = p_states[k];
    // parents[j][y] = (x, i) with y = F_f(i, x) and x in layer j - 1
    let mut parents: Vec<Vec<(u32, u8)>> = Vec::with_capacity(horizon - k + 1);
    let mut layer = vec![start];
    let mut best = (0u32, k, start);
    for j in 0..=horizon - k {
        if j > 0 {
            let mut seen = vec![(UNSEEN, 0u8); size];
            let mut next = Vec::new();
            for &x in &layer {
                let fx = f.image(x);
                for i in 0..n {
                    let bit = 1u32 << i;
                    let y = (x & !bit) | (fx & bit);
                    if seen[y as usize].0 == UNSEEN {
                        seen[y as usize] = (x, i as u8 + 1);
                        next.push(y);
                    }
                }
            }
            next.sort_unstable();
            parents.push(seen);
            layer = next;
        } else {
            parents.push(Vec::new());
        }
        let m = k + j;
        for &y in &layer {
            let h = (y ^ p_states[m]).count_ones();
            if h > best.0 {
                best = (h, m, y);
            }
        }
    }

    let (_, m_best, mut y) = best;
    let mut path = Vec::with_capacity(m_best - k);
    for j in (1..=m_best - k).rev() {
        let (x, i) = parents[j][y as usize];
        path.push(i as usize);
        y = x;
    }
    path.reverse();

    let mut prefix = p.strategy.take(k)?;
    prefix.extend(path.into_iter().map(StrategyTerm::Unary));
    let tail = p.strategy.advance(m_best);
    let witness = SystemPoint::new(Strategy::then(prefix, tail)?, p.state.clone())?;
    let initial_distance = distance(p, &witness, precision)?;
    let max_distance = distance(
        &gf_iterate(p, f, m_best)?,
        &gf_iterate(&witness, f, m_best)?,
        precision,
    )?;
    debug_assert_eq!(max_distance.integer_part(), best.0 as u64);
    Ok(SensitivityReport {
        max_distance,
        step: m_best,
        witness,
        initial_distance,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansivenessReport {
    pub n: usize,
    pub period_bound: usize,
    pub horizon: usize,
    pub points: usize,
    pub pairs: u64,
    pub failures: u64,
}

impl ExpansivenessReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Words of length `1..=max_period` over `1..=n` that are not a power of a
/// shorter word; their infinite repetitions are pairwise distinct.
fn primitive_words(n: usize, max_period: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for len in 1..=max_period {
        let total = n.pow(len as u32);
        for code in 0..total {
            let mut w = Vec::with_capacity(len);
            let mut c = code;
            for _ in 0..len {
                w.push(c % n + 1);
                c /= n;
            }
            let primitive = (1..len)
                .filter(|d| len % d == 0)
                .all(|d| (d..len).any(|t| w[t] != w[t - d]));
            if primitive {
                out.push(w);
            }
        }
    }
    out
}

/// Over every pair of distinct points `(S, E)` whose strategies are periodic
/// with period at most `period_bound`, checks that some `m <= horizon` gives
/// `d(G_f0^m(X), G_f0^m(Y)) >= 1`.
pub fn expansiveness_check_f0(
    n: usize,
    period_bound: usize,
    horizon: usize,
) -> Result<ExpansivenessReport> {
    if n == 0 || period_bound == 0 {
        return Err(Error::InvalidParameter("N and P must be positive".into()));
    }
    if n > MAX_EXPANSIVENESS_ARITY || period_bound > MAX_EXPANSIVENESS_PERIOD {
        return Err(Error::ScaleLimit(format!(
            "expansiveness check supports N <= {MAX_EXPANSIVENESS_ARITY}, P <= {MAX_EXPANSIVENESS_PERIOD}"
        )));
    }
    let f0 = UpdateFunction::negation(n)?;
    let mut points = Vec::new();
    for w in primitive_words(n, period_bound) {
        let terms = w.into_iter().map(StrategyTerm::Unary).collect();
        let s = Strategy::periodic(n, TermKind::Unary, terms)?;
        for e in 0..1u64 << n {
            points.push(SystemPoint::new(s.clone(), StateVector::from_index(n, e)?)?);
        }
    }
    // orbits[a][m] = G^m(points[a])
    let orbits: Vec<Vec<SystemPoint>> = par::map_indexed(Execution::default(), points.len(), |a| {
        let mut orbit = Vec::with_capacity(horizon + 1);
        let mut cur = points[a].clone();
        orbit.push(cur.clone());
        for _ in 0..horizon {
            cur = gf_step(&cur, &f0).expect("periodic strategies never run out");
            orbit.push(cur.clone());
        }
        orbit
    });
    let precision = super::DEFAULT_PRECISION;
    let failures = par::map_indexed(Execution::default(), points.len(), |a| -> Result<u64> {
        let mut failed = 0;
        for b in a + 1..points.len() {
            let mut separated = false;
            for (p, q) in orbits[a].iter().zip(&orbits[b]) {
                if distance(p, q, precision)?.integer_part() >= 1 {
                    separated = true;
                    break;
                }
            }
            failed += u64::from(!separated);
        }
        Ok(failed)
    })
    .into_iter()
    .sum::<Result<u64>>()?;
    let count = points.len() as u64;
    Ok(ExpansivenessReport {
        n,
        period_bound,
        horizon,
        points: points.len(),
        pairs: count * (count - 1) / 2,
        failures,
    })
}

/// Counts of distinct orbit segments `(x^0, ..., x^{k-1})` of `G_f`, over all
/// initial states and unary strategies, for `k = 1..=n_max`.
///
/// Segments with different prefixes are different, and segments sharing a
/// prefix differ exactly when their last states do, so the counts follow a
/// recurrence on the number of segments ending in each state.
pub fn entropy_growth_for(f: &UpdateFunction, n_max: usize) -> Result<Vec<u64>> {
    let n = f.arity();
    if n > MAX_ENTROPY_ARITY || n_max > MAX_ENTROPY_SEGMENT {
        return Err(Error::ScaleLimit(format!(
            "entropy growth supports N <= {MAX_ENTROPY_ARITY}, segment length <= {MAX_ENTROPY_SEGMENT}"
        )));
    }
    let size = 1usize << n;
    let successors: Vec<Vec<u32>> = (0..size as u32)
        .map(|x| {
            let fx = f.image(x);
            let set: HashSet<u32> = (0..n).map(|i| (x & !(1 << i)) | (fx & (1 << i))).collect();
            set.into_iter().collect()
        })
        .collect();
    let mut ending = vec![1u64; size];
    let mut counts = Vec::with_capacity(n_max);
    for k in 1..=n_max {
        if k > 1 {
            let mut next = vec![0u64; size];
            for (x, &c) in ending.iter().enumerate() {
                for &y in &successors[x] {
                    next[y as usize] += c;
                }
            }
            ending = next;
        }
        counts.push(ending.iter().sum());
    }
    Ok(counts)
}

/// [`entropy_growth_for`] applied to the vectorial negation `f_0`.
pub fn entropy_growth(n: usize, n_max: usize) -> Result<Vec<u64>> {
    if n > MAX_ENTROPY_ARITY {
        return Err(Error::ScaleLimit(format!(
            "entropy growth supports N <= {MAX_ENTROPY_ARITY}"
        )));
    }
    entropy_growth_for(&UpdateFunction::negation(n)?, n_max)
}

/// Least-squares slope of `ln(counts[k-1])` against `k`.
pub fn log_slope(counts: &[u64]) -> f64 {
    let pts: Vec<(f64, f64)> = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| ((k + 1) as f64, (c as f64).ln()))
        .collect();
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::make_negation;

    fn sv(bits: &[u8]) -> StateVector {
        StateVector::from_bits(&bits.iter().map(|&b| b == 1).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn continuity_identical_points() {
        let f = make_negation(3).unwrap();
        let x =
            SystemPoint::new(Strategy::unary(3, &[1, 2, 3, 1]).unwrap(), sv(&[1, 0, 1])).unwrap();
        assert!(continuity_holds_for(&f, &x, &x, 2).unwrap());
    }

    #[test]
    fn continuity_hand_example() {
        let f = make_negation(2).unwrap();
        let e = sv(&[0, 1]);
        let x = SystemPoint::new(Strategy::unary(2, &[1, 1, 2]).unwrap(), e.clone()).unwrap();
        let y = SystemPoint::new(Strategy::unary(2, &[1, 1, 1]).unwrap(), e).unwrap();
        assert!(continuity_holds_for(&f, &x, &y, 1).unwrap());
        let fx = gf_step(&x, &f).unwrap();
        let fy = gf_step(&y, &f).unwrap();
        assert_eq!(fx.state, sv(&[1, 1]));
        assert_eq!(fx.state, fy.state);
        assert_eq!(fx.strategy.head().unwrap(), fy.strategy.head().unwrap());
    }

    #[test]
    fn continuity_rejects_unrelated_points() {
        let f = make_negation(2).unwrap();
        let x = SystemPoint::new(Strategy::unary(2, &[1, 1, 2]).unwrap(), sv(&[0, 1])).unwrap();
        let y = SystemPoint::new(Strategy::unary(2, &[2, 1, 2]).unwrap(), sv(&[0, 1])).unwrap();
        assert!(continuity_holds_for(&f, &x, &y, 1).is_err());
        assert!(continuity_check(&f, 10, 0, 1).is_err());
    }

    #[test]
    fn continuity_random_trials() {
        let f = UpdateFunction::from_fn(3, |e| e.rotate_left(1) ^ 5).unwrap();
        let r = continuity_check(&f, 1000, 4, 7).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.trials, 1000);
    }

    #[test]
    fn divergence_of_identical_points_stays_zero() {
        let f = make_negation(3).unwrap();
        let p = SystemPoint::new(
            Strategy::unary(3, &[1, 2, 3, 3, 2, 1, 1, 2, 3, 1]).unwrap(),
            sv(&[0, 0, 1]),
        )
        .unwrap();
        let prof = divergence_profile(&f, &p, &p, 5, 4).unwrap();
        assert!(prof.iter().all(|d| d.is_zero()));
    }

    #[test]
    fn one_term_perturbation_splits_two_cells() {
        let f = make_negation(2).unwrap();
        let e = sv(&[0, 0]);
        // term k + 1 = 2 changed from 1 to 2
        let p = SystemPoint::new(Strategy::unary(2, &[1, 1, 1, 1, 1]).unwrap(), e.clone()).unwrap();
        let q = SystemPoint::new(Strategy::unary(2, &[1, 2, 1, 1, 1]).unwrap(), e).unwrap();
        let prof = divergence_profile(&f, &p, &q, 2, 3).unwrap();
        assert!(prof[0].fraction_below_pow10(1));
        assert_eq!(prof[2].integer_part(), 2);
    }

    #[test]
    fn sensitivity_reaches_n_minus_one() {
        let f = make_negation(2).unwrap();
        let s = Strategy::periodic(2, TermKind::Unary, vec![StrategyTerm::Unary(1)]).unwrap();
        let p = SystemPoint::new(s, sv(&[0, 0])).unwrap();
        let r = sensitivity_probe(&f, &p, 2, 8, 8).unwrap();
        assert!(r.max_distance.integer_part() >= 2);
        assert!(r.initial_distance.fraction_below_pow10(2));
        assert_eq!(r.initial_distance.integer_part(), 0);
        // the witness agrees with p on the first k terms
        assert_eq!(
            r.witness.strategy.take(2).unwrap(),
            p.strategy.take(2).unwrap()
        );
    }

    #[test]
    fn sensitivity_identity_cannot_diverge() {
        let f = UpdateFunction::identity(3).unwrap();
        let s = Strategy::periodic(3, TermKind::Unary, vec![StrategyTerm::Unary(2)]).unwrap();
        let p = SystemPoint::new(s, sv(&[1, 0, 0])).unwrap();
        let r = sensitivity_probe(&f, &p, 1, 6, 8).unwrap();
        assert!(r.max_distance.is_zero());
    }

    #[test]
    fn sensitivity_limits() {
        let f = make_negation(2).unwrap();
        let p = SystemPoint::new(Strategy::unary(2, &[1, 2]).unwrap(), sv(&[0, 0])).unwrap();
        assert!(matches!(
            sensitivity_probe(&f, &p, 3, 2, 8),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            sensitivity_probe(&f, &p, 1, 4, 8),
            Err(Error::StrategyExhausted { .. })
        ));
    }

    #[test]
    fn primitive_word_counts() {
        // necklace-free counts: 2 + 2 + 6 for n = 2, P = 3
        assert_eq!(primitive_words(2, 3).len(), 10);
        assert_eq!(primitive_words(3, 3).len(), 3 + 6 + 24);
        assert_eq!(primitive_words(2, 4).len(), 2 + 2 + 6 + 12);
    }

    #[test]
    fn expansiveness_small() {
        let r = expansiveness_check_f0(2, 3, 6).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.points, 40);
        assert_eq!(r.pairs, 780);
        assert!(matches!(
            expansiveness_check_f0(4, 2, 6),
            Err(Error::ScaleLimit(_))
        ));
        assert!(matches!(
            expansiveness_check_f0(2, 5, 6),
            Err(Error::ScaleLimit(_))
        ));
    }

    #[test]
    fn expansiveness_needs_enough_horizon() {
        // (1,2,...) vs (2,2,...) with equal states separate only at m = 1
        let r = expansiveness_check_f0(2, 1, 0).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn entropy_small_cases() {
        assert_eq!(entropy_growth(2, 1).unwrap(), vec![4]);
        assert_eq!(entropy_growth(2, 2).unwrap(), vec![4, 8]);
        assert_eq!(entropy_growth(3, 3).unwrap(), vec![8, 24, 72]);
        assert!(entropy_growth(4, 3).is_err());
        assert!(entropy_growth(2, 11).is_err());
        // identity: every segment is constant
        let id = UpdateFunction::identity(2).unwrap();
        assert_eq!(entropy_growth_for(&id, 4).unwrap(), vec![4, 4, 4, 4]);
    }

    #[test]
    fn log_slope_of_geometric_counts() {
        let counts: Vec<u64> = (0..8).map(|k| 8 * 3u64.pow(k)).collect();
        assert!((log_slope(&counts) - 3f64.ln()).abs() < 1e-12);
    }
}
