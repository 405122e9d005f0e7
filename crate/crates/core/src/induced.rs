//! Explicitly stored induced subgraph `G[S]` over a fixed universe.
//!
//! Vertices enter with the list of their neighbors already inside `S` and
//! leave with all incident edges. The active set is kept as a list so the
//! structure can be wiped in time proportional to its size.

use crate::graph::{Adjacency, Neighbors, VertexId};

#[derive(Debug, Clone)]
pub struct InducedGraph {
    adj: Adjacency,
    active: Vec<bool>,
    members: Vec<VertexId>,
    member_pos: Vec<u32>,
    edge_count: usize,
}

impl InducedGraph {
    pub fn new(n: usize) -> Self {
        Self {
            adj: Adjacency::new(n),
            active: vec![false; n],
            members: Vec::new(),
            member_pos: vec![u32::MAX; n],
            edge_count: 0,
        }
    }

    pub fn universe(&self) -> usize {
        self.active.len()
    }

    #[inline]
    pub fn is_active(&self, v: VertexId) -> bool {
        self.active[v]
    }

    /// Active vertices in no particular order.
    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    pub fn vertex_count(&self) -> usize {
        self.members.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj.contains(u, v)
    }

    /// Adds `v` with edges to `nbrs`, all of which must already be active.
    pub fn add_vertex(&mut self, v: VertexId, nbrs: &[VertexId]) {
        debug_assert!(!self.active[v], "vertex {v} is already active");
        self.active[v] = true;
        self.member_pos[v] = self.members.len() as u32;
        self.members.push(v);
        for &w in nbrs {
            debug_assert!(self.active[w], "neighbor {w} of {v} is not active");
            self.adj.link(v, w);
        }
        self.edge_count += nbrs.len();
    }

    /// Removes `v` and all its edges.
    pub fn remove_vertex(&mut self, v: VertexId) {
        debug_assert!(self.active[v], "vertex {v} is not active");
        self.edge_count -= self.adj.unlink_all(v);
        self.active[v] = false;
        let idx = self.member_pos[v] as usize;
        self.members.swap_remove(idx);
        if idx < self.members.len() {
            self.member_pos[self.members[idx]] = idx as u32;
        }
        self.member_pos[v] = u32::MAX;
    }

    /// Both endpoints must be active and the edge absent.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) {
        debug_assert!(self.active[u] && self.active[v]);
        debug_assert!(!self.adj.contains(u, v));
        self.adj.link(u, v);
        self.edge_count += 1;
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) {
        debug_assert!(self.adj.contains(u, v));
        self.adj.unlink(u, v);
        self.edge_count -= 1;
    }

    /// Drops every vertex and edge, in time proportional to the current size.
    pub fn clear(&mut self) {
        while let Some(&v) = self.members.last() {
            self.remove_vertex(v);
        }
    }

    pub fn max_degree(&self) -> usize {
        self.members
            .iter()
            .map(|&v| self.adj.list(v).len())
            .max()
            .unwrap_or(0)
    }
}

impl Neighbors for InducedGraph {
    #[inline]
    fn neighbors(&self, v: VertexId) -> &[VertexId] {
        self.adj.list(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertices_enter_and_leave_with_edges() {
        let mut h = InducedGraph::new(5);
        h.add_vertex(1, &[]);
        h.add_vertex(3, &[1]);
        h.add_vertex(4, &[1, 3]);
        assert_eq!(h.edge_count(), 3);
        assert_eq!(h.degree(1), 2);
        h.remove_vertex(1);
        assert_eq!(h.edge_count(), 1);
        assert_eq!(h.neighbors(3), &[4]);
        assert!(!h.is_active(1));
        assert_eq!(h.vertex_count(), 2);
    }

    #[test]
    fn clear_empties_everything() {
        let mut h = InducedGraph::new(4);
        h.add_vertex(0, &[]);
        h.add_vertex(2, &[0]);
        h.remove_edge(0, 2);
        h.add_edge(2, 0);
        h.clear();
        assert_eq!(h.vertex_count(), 0);
        assert_eq!(h.edge_count(), 0);
        h.add_vertex(2, &[]);
        assert!(h.neighbors(2).is_empty());
    }
}
