//! Hamiltonicity toolkit for OTIS (swapped) interconnection networks built
//! over bowtie graphs BF(m,n) and wrapped butterflies BF(n).
//!
//! * [`graph`]: labelled simple graphs, metrics, cycle verification.
//! * [`topology`]: generators and the OTIS composition.
//! * [`engine`]: forced-edge propagation, the complete decider and the
//!   edge-counting refutation.
//! * [`constructive`]: table-driven Hamiltonian cycle construction for
//!   bowtie-OTIS.
//! * [`trees`]: two independent spanning trees from a Hamiltonian cycle.
//! * [`io`]: edge-list, DOT and certificate formats.

pub mod constructive;
pub mod engine;
pub mod error;
pub mod graph;
pub mod io;
pub mod seed;
pub mod trees;
pub mod topology;

pub use error::{FormatError, GraphError, TopologyError};
pub use graph::{is_hamiltonian_cycle, max_edge_disjoint_ham_bound, Graph, GraphMetrics, HamCycle};
pub use topology::{bowtie_otis, gen_bowtie, gen_butterfly, otis, BowtieParams, OtisVertex};
