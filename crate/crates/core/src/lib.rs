//! Chaotic iterations on Boolean state vectors.
//!
//! * [`iterate`] runs chaotic iterations, both with subset strategies and as
//!   the dynamical system `G_f` on unary strategies.
//! * [`metric`] holds the exact distance on the phase space and bounded
//!   verifiers for continuity, sensitivity, expansiveness and entropy.
//! * [`graph`] builds the asynchronous iteration graph `Γ(f)`, certifies
//!   chaos through strong connectivity and counts chaotic functions.
//! * [`hash`] post-processes a keyed hash digest with chaotic iterations.

pub mod error;
pub mod function;
pub mod graph;
pub mod hash;
pub mod iterate;
pub mod metric;
pub mod par;
pub mod state;
pub mod strategy;
pub mod truth_table;

pub use error::{Error, HashError, Result, TruthTableError};
pub use function::{make_negation, BooleanMap, FnMap, Negation, UpdateFunction};
pub use iterate::{ci_step, ci_step_subset, ff_step, gf_iterate, gf_step, trajectory, SystemPoint};
pub use par::Execution;
pub use state::StateVector;
pub use strategy::{head, shift, Strategy, StrategyTerm, TermKind, TermSource};
pub use truth_table::{parse_truth_table, write_truth_table};
