//! Deterministic counter-based dynamic MIS.
//!
//! Every active vertex keeps the number of its neighbors in the MIS and is a
//! member exactly when that counter is zero. Edge and vertex updates adjust
//! counters locally; vertices whose counter drops to zero join from a pending
//! queue in increasing id order. The engine owns an explicit copy of the
//! active-induced subgraph, so it can run on `G[L]` without touching the
//! rest of the graph.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::graph::{DynamicGraph, GraphError, Neighbors, UpdateEvent, UpdateKind, VertexId};
use crate::induced::InducedGraph;
use crate::meter::WorkMeter;
use crate::oracle::{greedy_into, MisSet};
use crate::DynamicMis;

#[derive(Debug, Clone)]
pub struct DetMis {
    graph: InducedGraph,
    in_mis: Vec<bool>,
    mis_count: Vec<u32>,
    pending: BinaryHeap<Reverse<VertexId>>,
    scratch: Vec<VertexId>,
    work: u64,
}

impl DetMis {
    /// An engine over universe `n` with no active vertex.
    pub fn new(n: usize) -> Self {
        Self {
            graph: InducedGraph::new(n),
            in_mis: vec![false; n],
            mis_count: vec![0; n],
            pending: BinaryHeap::new(),
            scratch: Vec::new(),
            work: 0,
        }
    }

    /// Builds the engine on `g[active]` with the greedy MIS as initial state.
    /// Charges one unit per edge scanned.
    pub fn init(g: &DynamicGraph, active: impl Fn(VertexId) -> bool) -> Self {
        let n = g.vertex_count();
        let members: Vec<VertexId> = (0..n).filter(|&v| active(v)).collect();
        let mut engine = Self::new(n);
        engine.rebuild_from(g, &members);
        engine
    }

    /// Discards the current state and rebuilds on `source[members]`.
    /// `members` must be ascending.
    pub(crate) fn rebuild_from<N: Neighbors + ?Sized>(&mut self, source: &N, members: &[VertexId]) {
        self.clear();
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        let mut lower = std::mem::take(&mut self.scratch);
        for &v in members {
            lower.clear();
            for &w in source.neighbors(v) {
                self.work += 1;
                if w < v && self.graph.is_active(w) {
                    lower.push(w);
                }
            }
            self.graph.add_vertex(v, &lower);
        }
        self.scratch = lower;
        greedy_into(&self.graph, members.iter().copied(), &mut self.in_mis, &mut self.work);
        for &v in members {
            if self.in_mis[v] {
                for &w in self.graph.neighbors(v) {
                    self.mis_count[w] += 1;
                }
                self.work += self.graph.degree(v) as u64;
            }
        }
    }

    /// Deactivates everything, in time proportional to the active size.
    pub fn clear(&mut self) {
        for &v in self.graph.members() {
            self.in_mis[v] = false;
            self.mis_count[v] = 0;
        }
        self.work += (self.graph.vertex_count() + self.graph.edge_count()) as u64;
        self.graph.clear();
        self.pending.clear();
    }

    pub fn universe(&self) -> usize {
        self.in_mis.len()
    }

    #[inline]
    pub fn is_active(&self, v: VertexId) -> bool {
        self.graph.is_active(v)
    }

    #[inline]
    pub fn in_mis(&self, v: VertexId) -> bool {
        self.in_mis[v]
    }

    #[inline]
    pub fn mis_count(&self, v: VertexId) -> u32 {
        self.mis_count[v]
    }

    /// The maintained induced subgraph.
    pub fn graph(&self) -> &InducedGraph {
        &self.graph
    }

    pub fn work(&self) -> u64 {
        self.work
    }

    /// MIS members in increasing order.
    pub fn members(&self) -> Vec<VertexId> {
        let mut out: Vec<_> = self
            .graph
            .members()
            .iter()
            .copied()
            .filter(|&v| self.in_mis[v])
            .collect();
        out.sort_unstable();
        out
    }

    pub fn mis(&self) -> MisSet {
        MisSet::from_members(self.universe(), self.members())
    }

    /// Applies an edge update to the maintained subgraph. A no-op unless both
    /// endpoints are active.
    pub fn edge_update(&mut self, e: UpdateEvent) {
        let (u, v) = (e.u, e.v);
        self.work += 1;
        if !(self.graph.is_active(u) && self.graph.is_active(v)) {
            return;
        }
        match e.kind {
            UpdateKind::Insert => {
                self.graph.add_edge(u, v);
                match (self.in_mis[u], self.in_mis[v]) {
                    (true, true) => {
                        // larger id leaves
                        let (winner, loser) = if u < v { (u, v) } else { (v, u) };
                        self.leave(loser, Some(winner));
                        self.mis_count[loser] = 1;
                        self.work += 1;
                        self.drain();
                    }
                    (true, false) => self.bump(v),
                    (false, true) => self.bump(u),
                    (false, false) => {}
                }
            }
            UpdateKind::Delete => {
                self.graph.remove_edge(u, v);
                match (self.in_mis[u], self.in_mis[v]) {
                    (true, false) => {
                        self.drop_count(v);
                        self.drain();
                    }
                    (false, true) => {
                        self.drop_count(u);
                        self.drain();
                    }
                    _ => {}
                }
            }
        }
    }

    /// Activates `v` with `nbrs`, which must be exactly its active neighbors.
    pub fn activate(&mut self, v: VertexId, nbrs: &[VertexId]) {
        self.graph.add_vertex(v, nbrs);
        let count = nbrs.iter().filter(|&&w| self.in_mis[w]).count() as u32;
        self.work += nbrs.len() as u64 + 1;
        self.mis_count[v] = count;
        if count == 0 {
            self.join(v);
        }
    }

    /// Deactivates `v` with all its edges, repairing the MIS around it.
    pub fn deactivate(&mut self, v: VertexId) {
        let was_member = self.in_mis[v];
        let mut nbrs = std::mem::take(&mut self.scratch);
        nbrs.clear();
        nbrs.extend_from_slice(self.graph.neighbors(v));
        self.graph.remove_vertex(v);
        self.work += nbrs.len() as u64 + 1;
        self.in_mis[v] = false;
        self.mis_count[v] = 0;
        if was_member {
            for &w in &nbrs {
                self.drop_count(w);
            }
            self.drain();
        }
        self.scratch = nbrs;
    }

    #[inline]
    fn bump(&mut self, v: VertexId) {
        self.mis_count[v] += 1;
        self.work += 1;
    }

    #[inline]
    fn drop_count(&mut self, v: VertexId) {
        self.mis_count[v] -= 1;
        self.work += 1;
        if self.mis_count[v] == 0 && !self.in_mis[v] {
            self.pending.push(Reverse(v));
        }
    }

    /// Removes `v` from the MIS, releasing all neighbors except `skip`.
    fn leave(&mut self, v: VertexId, skip: Option<VertexId>) {
        self.in_mis[v] = false;
        let mut nbrs = std::mem::take(&mut self.scratch);
        nbrs.clear();
        nbrs.extend_from_slice(self.graph.neighbors(v));
        for &w in &nbrs {
            if Some(w) != skip {
                self.drop_count(w);
            } else {
                self.work += 1;
            }
        }
        self.scratch = nbrs;
    }

    fn join(&mut self, v: VertexId) {
        self.in_mis[v] = true;
        let degree = self.graph.degree(v);
        for i in 0..degree {
            let w = self.graph.neighbors(v)[i];
            self.mis_count[w] += 1;
        }
        self.work += degree as u64 + 1;
    }

    fn drain(&mut self) {
        while let Some(Reverse(v)) = self.pending.pop() {
            self.work += 1;
            if self.graph.is_active(v) && !self.in_mis[v] && self.mis_count[v] == 0 {
                self.join(v);
            }
        }
    }

    /// Full recount of every counter and membership rule. Returns the first
    /// inconsistency found.
    pub fn audit(&self) -> Result<(), String> {
        for &v in self.graph.members() {
            let count = self
                .graph
                .neighbors(v)
                .iter()
                .filter(|&&w| self.in_mis[w])
                .count() as u32;
            if count != self.mis_count[v] {
                return Err(format!(
                    "vertex {v}: stored MIS-neighbor count {} but recount gives {count}",
                    self.mis_count[v]
                ));
            }
            if self.in_mis[v] != (count == 0) {
                return Err(format!(
                    "vertex {v}: in_mis = {} with {count} MIS neighbors",
                    self.in_mis[v]
                ));
            }
        }
        Ok(())
    }
}

/// The baseline: one engine over the whole graph.
#[derive(Debug, Clone)]
pub struct Det {
    graph: DynamicGraph,
    engine: DetMis,
    updates: u64,
}

impl Det {
    pub fn new(n: usize) -> Result<Self, GraphError> {
        let graph = DynamicGraph::new(n)?;
        let engine = DetMis::init(&graph, |_| true);
        Ok(Self {
            graph,
            engine,
            updates: 0,
        })
    }

    pub fn engine(&self) -> &DetMis {
        &self.engine
    }
}

impl DynamicMis for Det {
    fn update(&mut self, e: UpdateEvent) -> Result<(), GraphError> {
        self.graph.apply(e)?;
        self.updates += 1;
        self.engine.edge_update(e);
        Ok(())
    }

    fn graph(&self) -> &DynamicGraph {
        &self.graph
    }

    fn mis(&self) -> MisSet {
        self.engine.mis()
    }

    fn meter(&self) -> WorkMeter {
        WorkMeter {
            work_units: self.engine.work(),
            updates: self.updates,
            ..WorkMeter::new(0)
        }
    }

    fn audit(&self) -> Result<(), String> {
        if self.engine.graph().edge_count() != self.graph.edge_count() {
            return Err("engine edge count differs from the graph".into());
        }
        self.engine.audit()
    }
}
