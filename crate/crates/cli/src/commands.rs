use std::io::Write;
use std::path::Path;

use chaotic_iterations::graph::{build_gamma, enumerate_chaotic_with};
use chaotic_iterations::hash::{
    avalanche_stats, AvalancheConfig, ChaoticHasher, HmacSha256, StreamHasher,
};
use chaotic_iterations::metric::{
    continuity_check, distance as exact_distance, entropy_growth_for, expansiveness_check_f0,
    log_slope, sensitivity_probe, DEFAULT_PRECISION, MAX_ENTROPY_ARITY, MAX_EXPANSIVENESS_ARITY,
};
use chaotic_iterations::{
    trajectory as run_trajectory, BooleanMap, Execution, StateVector, Strategy, SystemPoint,
    UpdateFunction,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::input::{self, FrameReader, Framing};
use crate::{CliError, KeyArgs};

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn hasher(bits: usize) -> Result<ChaoticHasher, CliError> {
    let inner =
        HmacSha256::truncated(bits).map_err(|e| CliError::Usage(format!("digest length: {e}")))?;
    Ok(ChaoticHasher::with_inner(inner))
}

pub fn hash(out: &mut dyn Write, key: &KeyArgs, bits: usize, file: &Path) -> Result<(), CliError> {
    let hasher = hasher(bits)?;
    let key = input::hash_key(&key.k1, &key.k2, key.rounds)?;
    let message = input::read_input(file)?;
    let digest = hasher.hash(&key, &message)?;
    writeln!(out, "digest={digest}")?;
    Ok(())
}

pub fn stream_hash(
    out: &mut dyn Write,
    key: &KeyArgs,
    frame_bits: usize,
    framing: Framing,
    no_mask: bool,
    file: &Path,
) -> Result<(), CliError> {
    let hasher = hasher(frame_bits)?;
    let key = input::hash_key(&key.k1, &key.k2, key.rounds)?;
    let mut session = StreamHasher::new(&hasher, &key);
    if no_mask {
        session = session.without_mask();
    }
    let mut frames = FrameReader::new(input::open_input(file)?, frame_bits / 8, framing);
    while let Some(frame) = frames.next_frame()? {
        let digest = session.push(&StateVector::from_bytes(frame_bits, &frame)?)?;
        writeln!(out, "frame={} digest={digest}", session.frames() - 1)?;
        out.flush()?;
    }
    if session.frames() == 0 {
        return Err(CliError::Domain("empty stream".into()));
    }
    Ok(())
}

pub fn analyze(out: &mut dyn Write, table: &str, require_chaotic: bool) -> Result<(), CliError> {
    let f = input::load_function(table)?;
    let g = build_gamma(&f)?;
    let scc = g.strongly_connected_components().count;
    let chaotic = scc == 1;
    writeln!(
        out,
        "chaotic={chaotic} scc={scc} vertices={} arcs={}",
        g.vertex_count(),
        g.arc_count()
    )?;
    if require_chaotic && !chaotic {
        return Err(CliError::Domain(format!("{table} is not chaotic")));
    }
    Ok(())
}

pub fn enumerate(out: &mut dyn Write, n: usize, sequential: bool) -> Result<(), CliError> {
    let r = enumerate_chaotic_with(n, execution(sequential), None)?;
    writeln!(out, "N={} total={} chaotic={}", r.n, r.total, r.chaotic)?;
    Ok(())
}

pub fn trajectory(
    out: &mut dyn Write,
    f: &str,
    x0: &str,
    strategy: &str,
    steps: Option<usize>,
    subset: bool,
) -> Result<(), CliError> {
    let f = input::load_function(f)?;
    let n = f.arity();
    let x0 = input::state("x0", n, x0)?;
    let s = input::strategy(n, strategy, subset)?;
    let steps = steps.unwrap_or_else(|| s.remaining().unwrap_or(0));
    let states = run_trajectory(&f, &x0, &s, steps)?;
    writeln!(out, "step,term,state")?;
    for (t, x) in states.iter().enumerate() {
        let term = match t {
            0 => String::new(),
            _ => s.term(t - 1)?.to_string(),
        };
        writeln!(out, "{t},{term},{x}")?;
    }
    Ok(())
}

pub fn distance(
    out: &mut dyn Write,
    n: usize,
    (x, s): (&str, &str),
    (y, t): (&str, &str),
    precision: Option<u32>,
) -> Result<(), CliError> {
    let point = |flag: &str, e: &str, w: &str| -> Result<SystemPoint, CliError> {
        let strategy = input::strategy(n, w, false)?;
        SystemPoint::new(strategy, input::state(flag, n, e)?).map_err(CliError::from)
    };
    let p = point("x", x, s)?;
    let q = point("y", y, t)?;
    let shorter = p
        .strategy
        .remaining()
        .min(q.strategy.remaining())
        .unwrap_or(0);
    let precision = precision.unwrap_or(DEFAULT_PRECISION.min(shorter as u32));
    let d = exact_distance(&p, &q, precision)?;
    writeln!(
        out,
        "hamming={} numerator={} denominator={} distance={}",
        d.integer_part(),
        d.fractional_numerator(),
        d.denominator(),
        d.to_f64()
    )?;
    Ok(())
}

pub struct AvalancheArgs {
    pub trials: usize,
    pub seed: u64,
    pub message_bytes: usize,
    pub flipped_bits: usize,
    pub sequential: bool,
}

pub fn avalanche(out: &mut dyn Write, key: &KeyArgs, a: AvalancheArgs) -> Result<(), CliError> {
    let key = input::hash_key(&key.k1, &key.k2, key.rounds)?;
    let cfg = AvalancheConfig {
        trials: a.trials,
        seed: a.seed,
        message_bytes: a.message_bytes,
        flipped_bits: a.flipped_bits,
        exec: execution(a.sequential),
    };
    let s = avalanche_stats(&ChaoticHasher::new(), &key, &cfg)?;
    writeln!(
        out,
        "trials={} n={} mean={:.6} stddev={:.6} min_rate={:.6} max_rate={:.6}",
        s.trials,
        s.n,
        s.mean,
        s.stddev,
        s.min_rate(),
        s.max_rate()
    )?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Check {
    All,
    Continuity,
    Sensitivity,
    Expansiveness,
    Entropy,
}

pub struct VerifyArgs {
    pub seed: u64,
    pub trials: usize,
    pub depth: usize,
    pub horizon: usize,
    pub segments: usize,
}

pub fn verify(out: &mut dyn Write, check: Check, f: &str, a: VerifyArgs) -> Result<(), CliError> {
    let f = input::load_function(f)?;
    let runs = |c: Check| check == Check::All || check == c;
    let mut passed = true;
    if runs(Check::Continuity) {
        passed &= continuity(out, &f, &a)?;
    }
    if runs(Check::Sensitivity) {
        passed &= sensitivity(out, &f, &a)?;
    }
    if runs(Check::Expansiveness) {
        passed &= expansiveness(out, &f, check == Check::Expansiveness)?;
    }
    if runs(Check::Entropy) {
        passed &= entropy(out, &f, &a, check == Check::Entropy)?;
    }
    if !passed {
        return Err(CliError::Domain("verification failed".into()));
    }
    Ok(())
}

fn continuity(out: &mut dyn Write, f: &UpdateFunction, a: &VerifyArgs) -> Result<bool, CliError> {
    let r = continuity_check(f, a.trials, a.depth, a.seed)?;
    writeln!(
        out,
        "check=continuity n={} trials={} depth={} violations={} passed={}",
        f.arity(),
        r.trials,
        r.depth,
        r.violations,
        r.passed()
    )?;
    Ok(r.passed())
}

/// Every probe must reach a state distance of at least `N - 1`.
fn sensitivity(out: &mut dyn Write, f: &UpdateFunction, a: &VerifyArgs) -> Result<bool, CliError> {
    let n = f.arity();
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let terms = a.horizon + DEFAULT_PRECISION as usize;
    let mut weakest = u64::MAX;
    for _ in 0..a.trials {
        let word: Vec<usize> = (0..terms).map(|_| rng.gen_range(1..=n)).collect();
        let bits: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        let p = SystemPoint::new(Strategy::unary(n, &word)?, StateVector::from_bits(&bits)?)?;
        let r = sensitivity_probe(f, &p, a.depth, a.horizon, DEFAULT_PRECISION)?;
        weakest = weakest.min(r.max_distance.integer_part());
    }
    let bound = n as u64 - 1;
    let passed = a.trials == 0 || weakest >= bound;
    let weakest = if a.trials == 0 { 0 } else { weakest };
    writeln!(
        out,
        "check=sensitivity n={n} probes={} depth={} horizon={} min_divergence={weakest} bound={bound} passed={passed}",
        a.trials, a.depth, a.horizon
    )?;
    Ok(passed)
}

/// Only defined for vectorial negation on small arities. Skipped otherwise
/// unless explicitly requested.
fn expansiveness(
    out: &mut dyn Write,
    f: &UpdateFunction,
    explicit: bool,
) -> Result<bool, CliError> {
    let n = f.arity();
    let applicable = n <= MAX_EXPANSIVENESS_ARITY && *f == UpdateFunction::negation(n)?;
    if !applicable {
        if explicit {
            return Err(CliError::Usage(format!(
                "expansiveness is checked for neg:N with N <= {MAX_EXPANSIVENESS_ARITY}"
            )));
        }
        writeln!(out, "check=expansiveness n={n} skipped=true")?;
        return Ok(true);
    }
    let (period, horizon) = (3, 2 * n + 2);
    let r = expansiveness_check_f0(n, period, horizon)?;
    writeln!(
        out,
        "check=expansiveness n={n} period_bound={period} horizon={horizon} pairs={} failures={} passed={}",
        r.pairs,
        r.failures,
        r.passed()
    )?;
    Ok(r.passed())
}

/// Fitted growth rate of distinct segments against `ln N`, 5% tolerance.
fn entropy(
    out: &mut dyn Write,
    f: &UpdateFunction,
    a: &VerifyArgs,
    explicit: bool,
) -> Result<bool, CliError> {
    let n = f.arity();
    if n > MAX_ENTROPY_ARITY {
        if explicit {
            return Err(CliError::Usage(format!(
                "entropy is checked for N <= {MAX_ENTROPY_ARITY}"
            )));
        }
        writeln!(out, "check=entropy n={n} skipped=true")?;
        return Ok(true);
    }
    if a.segments < 2 {
        return Err(CliError::Usage("--segments must be at least 2".into()));
    }
    let counts = entropy_growth_for(f, a.segments)?;
    let slope = log_slope(&counts);
    let target = (n as f64).ln();
    let passed = (slope - target).abs() <= 0.05 * target;
    let counts: Vec<String> = counts.iter().map(u64::to_string).collect();
    writeln!(
        out,
        "check=entropy n={n} segments={} counts={} slope={slope:.6} target={target:.6} passed={passed}",
        a.segments,
        counts.join(";")
    )?;
    Ok(passed)
}
