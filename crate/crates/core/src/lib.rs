//! Workbench for extremal graphs in the Ramsey-Turán regime.
//!
//! The crate is organised around a bitset-backed [`graph::Graph`] and a set of
//! exact kernels on top of it:
//!
//! * [`certify`] — clique / independent-set / short-odd-cycle search with
//!   verifiable certificates and explicit node budgets,
//! * [`constructions`] — the lower-bound graphs (Ω-pair composites, a
//!   desk-scale sphere graph, its full-degree modification),
//! * [`rt`] — exact `RT(n, m, K_t)` for small `n` plus the closed-form
//!   density evaluators and a persisted catalog,
//! * [`colored`] — weighted complete graphs, forbidden-pattern search,
//!   symmetrisation and the constructive partition extractor,
//! * [`density`] — pair-density checks and the recursive clique embedder,
//! * [`partition`] — everything done with vertex partitions of the original
//!   graph: exactness clauses, potential-driven refinement, codegree
//!   colourings and the odd-girth layering bound,
//! * [`pipeline`] / [`verify`] — reproducible multi-stage runs and the
//!   bundled verification battery.
//!
//! All randomness is seeded, all thresholds are exact rationals, and every
//! search either finishes exhaustively or reports an explicit inconclusive
//! status. With the default `parallel` feature the data-parallel sweeps run
//! on rayon; disabling it falls back to sequential loops with identical
//! results.

pub mod bits;
pub mod canon;
pub mod certify;
pub mod colored;
pub mod constructions;
pub mod density;
pub mod exec;
pub mod graph;
pub mod io;
pub mod partition;
pub mod pipeline;
pub mod ratio;
pub mod report;
pub mod rt;
pub mod verify;

pub use graph::Graph;
pub use ratio::Ratio;
