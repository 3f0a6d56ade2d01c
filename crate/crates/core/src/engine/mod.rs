//! Forced-edge propagation, the complete Hamiltonicity decider built on it,
//! and the edge-counting refutation.

mod counting;
mod propagate;
mod search;

pub use counting::{counting_refutation, max_independent_set, CountingCertificate, CountingOutcome, MAX_MIS_CANDIDATES};
pub use propagate::{
    propagate, Contradiction, ContradictionKind, ContradictionReport, EdgeAssignment, EdgeState, Order,
};
pub use search::{
    decide, decide_with, Budget, HamVerdict, LimitHit, SearchOptions, SearchStats, DEFAULT_MAX_NODES,
    DEFAULT_MAX_SECS,
};
