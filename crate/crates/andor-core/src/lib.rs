//! Proof and disproof numbers on AND/OR DAGs.
//!
//! Three ways of measuring the same thing live side by side here, and
//! their disagreements are the point:
//!
//! - [`eval`] computes the classic recursive proof/disproof numbers bottom
//!   up with memoization. On trees they are exact; on DAGs a shared leaf
//!   is charged once per path, so the values over-count (exponentially in
//!   the worst case, see [`generators::lattice`] and
//!   [`generators::comb_lattice`]).
//! - [`oracle`] computes the true numbers by definition: the smallest set
//!   of open leaves whose assumed outcome forces the target, found by
//!   subset enumeration. Slow by design, trustworthy by construction.
//! - [`pns`] is the best-first search engine driven by the recursive
//!   numbers, with tree and transposition-table modes.
//!
//! [`reduction`] builds, from any CNF formula, a DAG whose exact root
//! proof number is the variable count iff the formula is satisfiable,
//! which is why no shortcut past the oracle's exponential work is
//! expected to exist. [`generators`] holds the fixtures and seeded random
//! builders the test suites run on.
//!
//! The crate is `no_std` (with `alloc`); parsing, serialization, and the
//! command-line surface live in the companion `andor-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod eval;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod pn;
pub mod pns;
pub mod reduction;

pub use eval::{eval_pd, eval_phi_delta, map_phi_delta_to_pd, EvalError};
pub use graph::{
    normalize_mixed, revert, topo_order, AndOrDag, EdgeLabel, GraphBuilder, GraphError, NodeId,
    NodeKind, NodeStatus, RESERVED_ID_MARKER,
};
pub use oracle::{
    assume_eval, exact_disproof_number, exact_number, exact_proof_number, Mode, OracleError,
    WitnessSet, DEFAULT_LEAF_BUDGET,
};
pub use pn::{PhiDeltaPair, PnPair, PnValue};
pub use pns::{
    materialize_problem, run, EngineError, Expansion, GraphProblem, LeafResolution,
    ProblemExpander, SearchMode, SearchOutcome, SearchTree, TerminalVerdict, Verdict,
};
pub use reduction::{
    reduce_cnf, reduce_cnf_dual, sat_brute_force, verify_reduction, CnfError, CnfFormula, Lit,
    ReductionReport, VerifyError,
};
pub use generators::{
    comb_lattice, fixture, lattice, lattice_with_bottom, nim_problem, random_cnf, random_dag,
    random_tree, Fixture, GenError, NimProblem, NimState, SplitMix64,
};
