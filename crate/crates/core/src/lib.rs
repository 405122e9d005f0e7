//! Fully dynamic maximal independent set.
//!
//! Four algorithms share one graph representation and one verification
//! oracle: the deterministic counter-based baseline ([`Det`]), the
//! single-level phase algorithms with `n^{2/3}` and `m^{1/3}` amortized cost
//! ([`Warmup`], [`M13`]) and the nested-level `√n` algorithm ([`SqrtN`]).
//! Work is metered in machine-independent units so scaling behaviour can be
//! checked without wall-clock noise.

pub mod det;
pub mod graph;
pub mod harness;
pub mod induced;
pub mod m13;
pub mod meter;
pub mod oracle;
pub mod par;
pub mod phase;
pub mod rng;
pub mod sqrtn;
pub mod warmup;
pub mod workload;

pub use det::{Det, DetMis};
pub use graph::{DynamicGraph, GraphError, Neighbors, UpdateEvent, UpdateKind, VertexId};
pub use m13::M13;
pub use meter::{PhaseCause, PhaseRecord, WorkMeter};
pub use oracle::{brute_force_lex_mis, greedy_mis, verify_mis, MisSet, Verdict};
pub use phase::{PhaseParams, Step};
pub use sqrtn::SqrtN;

pub use warmup::Warmup;

/// Common driver interface: each algorithm owns its graph and applies the
/// update before repairing its MIS.
pub trait DynamicMis {
    fn update(&mut self, e: UpdateEvent) -> Result<(), GraphError>;

    fn graph(&self) -> &DynamicGraph;

    /// The maintained independent set.
    fn mis(&self) -> MisSet;

    /// Metrics so far, with `work_units` filled in.
    fn meter(&self) -> WorkMeter;

    /// Full recomputation of internal invariants.
    fn audit(&self) -> Result<(), String>;
}
