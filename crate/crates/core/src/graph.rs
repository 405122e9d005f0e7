//! Fixed-universe dynamic graph.
//!
//! Vertices are the dense range `0..n`, fixed at construction. Each vertex
//! keeps an unordered neighbor list for scans, and a shared slot index gives
//! O(1)-expected membership tests and swap-removal.

use std::fmt;

use rustc_hash::FxHashMap;
use thiserror::Error;

/// Dense vertex identifier in `0..n`.
pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a graph needs at least one vertex")]
    EmptyUniverse,
    #[error("vertex {vertex} is outside the universe 0..{n}")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge ({0}, {1}) is already present")]
    DuplicateEdge(VertexId, VertexId),
    #[error("edge ({0}, {1}) is not present")]
    MissingEdge(VertexId, VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UpdateKind {
    Insert,
    Delete,
}

/// A single edge insertion or deletion. Endpoints are stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpdateEvent {
    pub kind: UpdateKind,
    pub u: VertexId,
    pub v: VertexId,
}

impl UpdateEvent {
    /// Builds a normalized event. Panics on a self-loop.
    pub fn new(kind: UpdateKind, a: VertexId, b: VertexId) -> Self {
        assert_ne!(a, b, "update events never carry self-loops");
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Self { kind, u, v }
    }

    pub fn insert(a: VertexId, b: VertexId) -> Self {
        Self::new(UpdateKind::Insert, a, b)
    }

    pub fn delete(a: VertexId, b: VertexId) -> Self {
        Self::new(UpdateKind::Delete, a, b)
    }

    pub fn is_insert(&self) -> bool {
        self.kind == UpdateKind::Insert
    }
}

impl fmt::Display for UpdateEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.kind {
            UpdateKind::Insert => '+',
            UpdateKind::Delete => '-',
        };
        write!(f, "{} {} {}", sign, self.u, self.v)
    }
}

/// Read access to an adjacency structure, shared by the full graph and the
/// explicitly maintained induced subgraphs.
pub trait Neighbors {
    fn neighbors(&self, v: VertexId) -> &[VertexId];

    fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).len()
    }
}

#[inline]
fn slot_key(u: VertexId, v: VertexId) -> u64 {
    ((u as u64) << 32) | v as u64
}

/// Symmetric adjacency lists with a slot index. `slot[(u, v)]` is the
/// position of `v` inside `lists[u]`.
#[derive(Debug, Clone, Default)]
pub(crate) struct Adjacency {
    lists: Vec<Vec<VertexId>>,
    slot: FxHashMap<u64, u32>,
}

impl Adjacency {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            lists: vec![Vec::new(); n],
            slot: FxHashMap::default(),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.lists.len()
    }

    #[inline]
    pub(crate) fn contains(&self, u: VertexId, v: VertexId) -> bool {
        self.slot.contains_key(&slot_key(u, v))
    }

    #[inline]
    pub(crate) fn list(&self, v: VertexId) -> &[VertexId] {
        &self.lists[v]
    }

    /// Caller guarantees the edge is absent.
    pub(crate) fn link(&mut self, u: VertexId, v: VertexId) {
        self.push_half(u, v);
        self.push_half(v, u);
    }

    /// Caller guarantees the edge is present.
    pub(crate) fn unlink(&mut self, u: VertexId, v: VertexId) {
        self.remove_half(u, v);
        self.remove_half(v, u);
    }

    /// Removes every edge at `v`, returning how many were removed.
    pub(crate) fn unlink_all(&mut self, v: VertexId) -> usize {
        let list = std::mem::take(&mut self.lists[v]);
        for &w in &list {
            self.slot.remove(&slot_key(v, w));
            self.remove_half(w, v);
        }
        let removed = list.len();
        // keep the allocation around for the next activation
        let mut list = list;
        list.clear();
        self.lists[v] = list;
        removed
    }

    fn push_half(&mut self, u: VertexId, v: VertexId) {
        let list = &mut self.lists[u];
        self.slot.insert(slot_key(u, v), list.len() as u32);
        list.push(v);
    }

    fn remove_half(&mut self, u: VertexId, v: VertexId) {
        let idx = self
            .slot
            .remove(&slot_key(u, v))
            .expect("adjacency slot index out of sync") as usize;
        let list = &mut self.lists[u];
        list.swap_remove(idx);
        if idx < list.len() {
            let moved = list[idx];
            self.slot.insert(slot_key(u, moved), idx as u32);
        }
    }
}

/// The dynamic graph every algorithm reads from.
#[derive(Debug, Clone)]
pub struct DynamicGraph {
    adj: Adjacency,
    edge_count: usize,
    // vertices with at least one edge, for preprocessing that must not pay O(n)
    live: Vec<VertexId>,
    live_pos: Vec<u32>,
}

impl DynamicGraph {
    pub fn new(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyUniverse);
        }
        Ok(Self {
            adj: Adjacency::new(n),
            edge_count: 0,
            live: Vec::new(),
            live_pos: vec![u32::MAX; n],
        })
    }

    /// Builds a graph from an edge list, rejecting duplicates and self-loops.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let mut g = Self::new(n)?;
        for (a, b) in edges {
            g.check_pair(a, b)?;
            g.apply(UpdateEvent::insert(a, b))?;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.vertex_count() && v < self.vertex_count() && self.adj.contains(u, v)
    }

    fn check_pair(&self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        let n = self.vertex_count();
        for x in [u, v] {
            if x >= n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        Ok(())
    }

    /// Applies a single edge update.
    pub fn apply(&mut self, e: UpdateEvent) -> Result<(), GraphError> {
        self.check_pair(e.u, e.v)?;
        match e.kind {
            UpdateKind::Insert => {
                if self.adj.contains(e.u, e.v) {
                    return Err(GraphError::DuplicateEdge(e.u, e.v));
                }
                self.adj.link(e.u, e.v);
                self.edge_count += 1;
                for x in [e.u, e.v] {
                    if self.adj.list(x).len() == 1 {
                        self.live_pos[x] = self.live.len() as u32;
                        self.live.push(x);
                    }
                }
            }
            UpdateKind::Delete => {
                if !self.adj.contains(e.u, e.v) {
                    return Err(GraphError::MissingEdge(e.u, e.v));
                }
                self.adj.unlink(e.u, e.v);
                self.edge_count -= 1;
                for x in [e.u, e.v] {
                    if self.adj.list(x).is_empty() {
                        let idx = self.live_pos[x] as usize;
                        self.live.swap_remove(idx);
                        if idx < self.live.len() {
                            self.live_pos[self.live[idx]] = idx as u32;
                        }
                        self.live_pos[x] = u32::MAX;
                    }
                }
            }
        }
        Ok(())
    }

    /// Vertices of nonzero degree, in no particular order.
    pub fn non_isolated(&self) -> &[VertexId] {
        &self.live
    }

    /// Number of neighbors of `v` that satisfy `mask`.
    pub fn induced_degree(&self, v: VertexId, mask: impl Fn(VertexId) -> bool) -> usize {
        self.adj.list(v).iter().filter(|&&w| mask(w)).count()
    }

    /// Maximum degree over all vertices.
    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count())
            .map(|v| self.degree(v))
            .max()
            .unwrap_or(0)
    }

    /// All edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 0..self.vertex_count() {
            for &v in self.adj.list(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

impl Neighbors for DynamicGraph {
    #[inline]
    fn neighbors(&self, v: VertexId) -> &[VertexId] {
        self.adj.list(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> DynamicGraph {
        DynamicGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn new_graph_is_empty() {
        let g = DynamicGraph::new(4).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 0);
        let g = DynamicGraph::new(1).unwrap();
        assert_eq!(g.degree(0), 0);
        assert_eq!(DynamicGraph::new(0).unwrap_err(), GraphError::EmptyUniverse);
    }

    #[test]
    fn insert_then_delete() {
        let mut g = DynamicGraph::new(4).unwrap();
        g.apply(UpdateEvent::insert(0, 1)).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.neighbors(0), &[1]);
        assert_eq!(g.neighbors(1), &[0]);
        g.apply(UpdateEvent::delete(0, 1)).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert!(g.neighbors(0).is_empty());
    }

    #[test]
    fn malformed_updates_are_rejected() {
        let mut g = DynamicGraph::new(3).unwrap();
        assert_eq!(
            g.apply(UpdateEvent::delete(0, 1)),
            Err(GraphError::MissingEdge(0, 1))
        );
        g.apply(UpdateEvent::insert(1, 0)).unwrap();
        assert_eq!(
            g.apply(UpdateEvent::insert(0, 1)),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert_eq!(
            g.apply(UpdateEvent::insert(0, 7)),
            Err(GraphError::VertexOutOfRange { vertex: 7, n: 3 })
        );
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    #[should_panic]
    fn self_loop_event_panics() {
        let _ = UpdateEvent::insert(2, 2);
    }

    #[test]
    fn induced_degree_respects_mask() {
        let g = triangle();
        assert_eq!(g.induced_degree(0, |_| true), 2);
        assert_eq!(g.induced_degree(0, |w| w == 1), 1);
        assert_eq!(g.induced_degree(0, |_| false), 0);
    }

    #[test]
    fn swap_remove_keeps_slots_consistent() {
        let mut g = DynamicGraph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        g.apply(UpdateEvent::delete(0, 1)).unwrap();
        g.apply(UpdateEvent::delete(0, 3)).unwrap();
        let mut rest = g.neighbors(0).to_vec();
        rest.sort_unstable();
        assert_eq!(rest, vec![2, 4]);
        assert!(g.has_edge(4, 0));
        assert!(!g.has_edge(3, 0));
        g.apply(UpdateEvent::delete(0, 4)).unwrap();
        g.apply(UpdateEvent::delete(0, 2)).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert!(g.non_isolated().is_empty());
    }

    #[test]
    fn non_isolated_tracks_degree() {
        let mut g = DynamicGraph::from_edges(6, [(0, 1), (1, 2)]).unwrap();
        let mut live = g.non_isolated().to_vec();
        live.sort_unstable();
        assert_eq!(live, vec![0, 1, 2]);
        g.apply(UpdateEvent::delete(0, 1)).unwrap();
        let mut live = g.non_isolated().to_vec();
        live.sort_unstable();
        assert_eq!(live, vec![1, 2]);
    }

    #[test]
    fn display_matches_file_format() {
        assert_eq!(UpdateEvent::insert(5, 2).to_string(), "+ 2 5");
        assert_eq!(UpdateEvent::delete(0, 9).to_string(), "- 0 9");
    }
}
