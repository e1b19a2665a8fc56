//! The asynchronous iteration graph `Γ(f)` and chaos certification.
//!
//! `Γ(f)` has the `2^N` states as vertices and, for each state `x` and cell
//! `i`, an arc `x -> F_f(i, x)`. Parallel arcs and self-loops are kept, so
//! every vertex has out-degree exactly `N`. `G_f` is chaotic in the sense of
//! Devaney exactly when `Γ(f)` is strongly connected.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::function::{BooleanMap, UpdateFunction};
use crate::par::{self, Execution};
use crate::state::StateVector;
use crate::strategy::Strategy;

pub const MAX_GRAPH_ARITY: usize = 20;
pub const MAX_ENUMERATION_ARITY: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub source: u32,
    /// Updated cell, 1-based.
    pub index: usize,
    pub target: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationGraph {
    n: usize,
    // succ[x * n + (i - 1)] = F_f(i, x)
    succ: Vec<u32>,
}

#[inline]
fn arc_target(x: u32, fx: u32, i: usize) -> u32 {
    let bit = 1u32 << i;
    (x & !bit) | (fx & bit)
}

fn fill_successors(n: usize, table: &[u32], succ: &mut Vec<u32>) {
    succ.clear();
    for (x, &fx) in table.iter().enumerate() {
        succ.extend((0..n).map(|i| arc_target(x as u32, fx, i)));
    }
}

impl IterationGraph {
    pub fn build(f: &UpdateFunction) -> Result<Self> {
        let n = f.arity();
        if n > MAX_GRAPH_ARITY {
            return Err(Error::ArityTooLarge {
                arity: n,
                max: MAX_GRAPH_ARITY,
            });
        }
        let mut succ = Vec::with_capacity(n << n);
        fill_successors(n, f.table(), &mut succ);
        Ok(IterationGraph { n, succ })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        1 << self.n
    }

    pub fn arc_count(&self) -> usize {
        self.succ.len()
    }

    /// Targets of the arcs leaving `x`, ordered by update index.
    pub fn successors(&self, x: u32) -> &[u32] {
        let start = x as usize * self.n;
        &self.succ[start..start + self.n]
    }

    /// All arcs, ordered by source then update index.
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.succ.iter().enumerate().map(|(k, &target)| Arc {
            source: (k / self.n) as u32,
            index: k % self.n + 1,
            target,
        })
    }

    pub fn strongly_connected_components(&self) -> Components {
        let mut scratch = Tarjan::default();
        scratch.run(self.vertex_count(), self.n, &self.succ);
        Components {
            count: scratch.count,
            component: scratch.comp,
        }
    }

    pub fn is_strongly_connected(&self) -> bool {
        Tarjan::default().run(self.vertex_count(), self.n, &self.succ) == 1
    }
}

/// Component label of every vertex; labels are assigned in the order Tarjan's
/// algorithm completes components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub count: usize,
    pub component: Vec<u32>,
}

/// Reusable buffers for an iterative Tarjan SCC pass over a graph with fixed
/// out-degree.
#[derive(Default)]
struct Tarjan {
    index: Vec<u32>,
    low: Vec<u32>,
    on_stack: Vec<bool>,
    stack: Vec<u32>,
    // (vertex, next arc slot)
    calls: Vec<(u32, u32)>,
    comp: Vec<u32>,
    count: usize,
}

impl Tarjan {
    const UNVISITED: u32 = u32::MAX;

    fn run(&mut self, vertices: usize, degree: usize, succ: &[u32]) -> usize {
        self.index.clear();
        self.index.resize(vertices, Self::UNVISITED);
        self.low.clear();
        self.low.resize(vertices, 0);
        self.on_stack.clear();
        self.on_stack.resize(vertices, false);
        self.comp.clear();
        self.comp.resize(vertices, 0);
        self.stack.clear();
        self.calls.clear();
        self.count = 0;
        let mut next_index = 0u32;

        for root in 0..vertices as u32 {
            if self.index[root as usize] != Self::UNVISITED {
                continue;
            }
            self.index[root as usize] = next_index;
            self.low[root as usize] = next_index;
            next_index += 1;
            self.stack.push(root);
            self.on_stack[root as usize] = true;
            self.calls.push((root, 0));

            while let Some(&mut (v, ref mut slot)) = self.calls.last_mut() {
                let vu = v as usize;
                if (*slot as usize) < degree {
                    let w = succ[vu * degree + *slot as usize];
                    *slot += 1;
                    let wu = w as usize;
                    if self.index[wu] == Self::UNVISITED {
                        self.index[wu] = next_index;
                        self.low[wu] = next_index;
                        next_index += 1;
                        self.stack.push(w);
                        self.on_stack[wu] = true;
                        self.calls.push((w, 0));
                    } else if self.on_stack[wu] {
                        self.low[vu] = self.low[vu].min(self.index[wu]);
                    }
                    continue;
                }
                self.calls.pop();
                if let Some(&(parent, _)) = self.calls.last() {
                    let pu = parent as usize;
                    self.low[pu] = self.low[pu].min(self.low[vu]);
                }
                if self.low[vu] == self.index[vu] {
                    loop {
                        let w = self.stack.pop().expect("root is on the stack");
                        self.on_stack[w as usize] = false;
                        self.comp[w as usize] = self.count as u32;
                        if w == v {
                            break;
                        }
                    }
                    self.count += 1;
                }
            }
        }
        self.count
    }
}

pub fn build_gamma(f: &UpdateFunction) -> Result<IterationGraph> {
    IterationGraph::build(f)
}

pub fn is_strongly_connected(g: &IterationGraph) -> bool {
    g.is_strongly_connected()
}

/// Whether `G_f` is chaotic, decided by strong connectivity of `Γ(f)`.
pub fn is_chaotic(f: &UpdateFunction) -> Result<bool> {
    Ok(build_gamma(f)?.is_strongly_connected())
}

/// A shortest unary strategy prefix driving `x` to `y` under chaotic
/// iterations of `f`, or `None` when `y` is unreachable. Ties are broken
/// towards lower update indices.
pub fn find_strategy_path(
    f: &UpdateFunction,
    x: &StateVector,
    y: &StateVector,
) -> Result<Option<Strategy>> {
    let n = f.arity();
    for s in [x, y] {
        if s.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: s.len(),
            });
        }
    }
    if n > MAX_GRAPH_ARITY {
        return Err(Error::ArityTooLarge {
            arity: n,
            max: MAX_GRAPH_ARITY,
        });
    }
    let start = x.to_index().unwrap() as u32;
    let goal = y.to_index().unwrap() as u32;
    const UNSEEN: u32 = u32::MAX;
    let mut parent = vec![(UNSEEN, 0u8); 1 << n];
    parent[start as usize] = (start, 0);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        if v == goal {
            break;
        }
        let fv = f.image(v);
        for i in 0..n {
            let w = arc_target(v, fv, i);
            if parent[w as usize].0 == UNSEEN {
                parent[w as usize] = (v, i as u8 + 1);
                queue.push_back(w);
            }
        }
    }
    if parent[goal as usize].0 == UNSEEN {
        return Ok(None);
    }
    let mut path = Vec::new();
    let mut v = goal;
    while v != start {
        let (p, i) = parent[v as usize];
        path.push(i as usize);
        v = p;
    }
    path.reverse();
    Ok(Some(Strategy::unary(n, &path)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationReport {
    pub n: usize,
    /// `(2^N)^(2^N)`, the number of all maps `B^N -> B^N`.
    pub total: u64,
    pub chaotic: u64,
}

impl EnumerationReport {
    /// Whether every function turned out chaotic; false for every `N`, since
    /// the identity never is.
    pub fn all_chaotic(&self) -> bool {
        self.total == self.chaotic
    }
}

fn function_space(n: usize) -> Result<(u32, u64)> {
    if n == 0 {
        return Err(Error::ZeroArity);
    }
    if n > MAX_ENUMERATION_ARITY {
        return Err(Error::ScaleLimit(format!(
            "enumeration supports N <= {MAX_ENUMERATION_ARITY}"
        )));
    }
    let bits = (n << n) as u32;
    Ok((bits, 1u64 << bits))
}

/// Decodes a function index: table entry `e` is bits `N*e .. N*e + N` of `index`.
pub fn function_from_index(n: usize, index: u64) -> Result<UpdateFunction> {
    let (_, total) = function_space(n)?;
    if index >= total {
        return Err(Error::InvalidParameter(format!(
            "function index {index} out of range for N={n}"
        )));
    }
    let mask = (1u64 << n) - 1;
    UpdateFunction::from_fn(n, |e| ((index >> (n as u64 * e as u64)) & mask) as u32)
}

/// Counts chaotic functions among all `B^N -> B^N` with the default
/// execution mode.
pub fn enumerate_chaotic(n: usize) -> Result<EnumerationReport> {
    enumerate_chaotic_with(n, Execution::default(), None)
}

/// Exhaustive count of chaotic functions.
///
/// The function space is split into chunks keyed by the first table entries
/// (the low bits of the function index); chunks are scanned independently and
/// their counts summed, so the result does not depend on scheduling.
/// `progress(done, total)` is called after each chunk.
pub fn enumerate_chaotic_with(
    n: usize,
    exec: Execution,
    progress: Option<&(dyn Fn(usize, usize) + Sync)>,
) -> Result<EnumerationReport> {
    let (bits, total) = function_space(n)?;
    let key_entries = if n >= 3 { 3 } else { 1 };
    let key_bits = (key_entries * n) as u32;
    let chunks = 1usize << key_bits;
    let per_chunk = 1u64 << (bits - key_bits);
    let done = AtomicUsize::new(0);
    let states = 1usize << n;
    let mask = (1u64 << n) - 1;

    let chaotic = par::sum_indexed(exec, chunks, |chunk| {
        let mut tarjan = Tarjan::default();
        let mut table = vec![0u32; states];
        let mut succ = Vec::with_capacity(n * states);
        let mut count = 0;
        for high in 0..per_chunk {
            let index = (high << key_bits) | chunk as u64;
            for (e, slot) in table.iter_mut().enumerate() {
                *slot = ((index >> (n * e)) & mask) as u32;
            }
            fill_successors(n, &table, &mut succ);
            if tarjan.run(states, n, &succ) == 1 {
                count += 1;
            }
        }
        let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(report) = progress {
            report(finished, chunks);
        }
        count
    });
    Ok(EnumerationReport { n, total, chaotic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::make_negation;
    use crate::iterate::trajectory;

    #[test]
    fn identity_one_cell() {
        let g = build_gamma(&UpdateFunction::identity(1).unwrap()).unwrap();
        assert_eq!(g.vertex_count(), 2);
        let arcs: Vec<(u32, u32)> = g.arcs().map(|a| (a.source, a.target)).collect();
        assert_eq!(arcs, vec![(0, 0), (1, 1)]);
        assert!(!g.is_strongly_connected());
    }

    #[test]
    fn negation_graphs() {
        let g = build_gamma(&make_negation(1).unwrap()).unwrap();
        let arcs: Vec<(u32, u32)> = g.arcs().map(|a| (a.source, a.target)).collect();
        assert_eq!(arcs, vec![(0, 1), (1, 0)]);

        let g = build_gamma(&make_negation(2).unwrap()).unwrap();
        assert_eq!(g.arc_count(), 8);
        let arcs: Vec<(u32, usize, u32)> =
            g.arcs().map(|a| (a.source, a.index, a.target)).collect();
        assert_eq!(
            arcs,
            vec![
                (0, 1, 1),
                (0, 2, 2),
                (1, 1, 0),
                (1, 2, 3),
                (2, 1, 3),
                (2, 2, 0),
                (3, 1, 2),
                (3, 2, 1)
            ]
        );
        assert!(g.is_strongly_connected());
        assert_eq!(g.strongly_connected_components().count, 1);
    }

    #[test]
    fn single_vertex_self_loop() {
        let g = IterationGraph {
            n: 1,
            succ: vec![0],
        };
        assert_eq!(Tarjan::default().run(1, 1, &g.succ), 1);
    }

    #[test]
    fn chaos_certification() {
        for n in 1..=6 {
            assert!(is_chaotic(&make_negation(n).unwrap()).unwrap());
            assert!(!is_chaotic(&UpdateFunction::identity(n).unwrap()).unwrap());
            assert!(!is_chaotic(&UpdateFunction::constant(n, 0).unwrap()).unwrap());
        }
        assert!(matches!(
            build_gamma(&make_negation(21).unwrap()),
            Err(Error::ArityTooLarge { .. })
        ));
    }

    #[test]
    fn component_labels_cover_vertices() {
        let c = build_gamma(&UpdateFunction::identity(3).unwrap())
            .unwrap()
            .strongly_connected_components();
        assert_eq!(c.count, 8);
        let mut labels = c.component.clone();
        labels.sort_unstable();
        labels.dedup();
        assert_eq!(labels.len(), 8);
    }

    #[test]
    fn strategy_path_examples() {
        let f = make_negation(2).unwrap();
        let x = StateVector::from_index(2, 0).unwrap();
        let y = StateVector::from_index(2, 3).unwrap();
        assert_eq!(
            find_strategy_path(&f, &x, &x).unwrap().unwrap().remaining(),
            Some(0)
        );
        let s = find_strategy_path(&f, &x, &y).unwrap().unwrap();
        assert_eq!(
            s.take(2).unwrap(),
            Strategy::unary(2, &[1, 2]).unwrap().take(2).unwrap()
        );
        assert_eq!(trajectory(&f, &x, &s, 2).unwrap()[2], y);

        let id = UpdateFunction::identity(1).unwrap();
        let a = StateVector::from_index(1, 0).unwrap();
        let b = StateVector::from_index(1, 1).unwrap();
        assert!(find_strategy_path(&id, &a, &b).unwrap().is_none());
        assert!(find_strategy_path(&id, &a, &y).is_err());
    }

    #[test]
    fn enumerate_one_cell() {
        let r = enumerate_chaotic(1).unwrap();
        assert_eq!((r.total, r.chaotic), (4, 1));
        assert!(!r.all_chaotic());
        assert!(matches!(enumerate_chaotic(4), Err(Error::ScaleLimit(_))));
        assert!(enumerate_chaotic(0).is_err());
    }

    #[test]
    fn enumeration_matches_per_function_check() {
        let fast = enumerate_chaotic_with(2, Execution::Sequential, None).unwrap();
        let slow = (0..fast.total)
            .filter(|&i| is_chaotic(&function_from_index(2, i).unwrap()).unwrap())
            .count() as u64;
        assert_eq!(fast.chaotic, slow);
        assert_eq!(
            enumerate_chaotic_with(2, Execution::Parallel, None).unwrap(),
            fast
        );
    }

    #[test]
    fn function_index_layout() {
        // entry e sits at bits 2e..2e+2
        let f = function_from_index(2, 0b00_01_10_11).unwrap();
        assert_eq!(f.table(), &[3, 2, 1, 0]);
        assert_eq!(f, make_negation(2).unwrap());
        assert!(function_from_index(1, 4).is_err());
    }

    #[test]
    fn progress_reports_every_chunk() {
        let calls = AtomicUsize::new(0);
        let cb = |_: usize, total: usize| {
            assert_eq!(total, 4);
            calls.fetch_add(1, Ordering::Relaxed);
        };
        enumerate_chaotic_with(2, Execution::Sequential, Some(&cb)).unwrap();
        assert_eq!(calls.load(Ordering::Relaxed), 4);
    }
}
