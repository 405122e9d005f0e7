//! Static lexicographically-first greedy MIS and the verification oracle
//! every dynamic algorithm is checked against.

use thiserror::Error;

use crate::graph::{DynamicGraph, Neighbors, VertexId};

/// Largest universe accepted by [`brute_force_lex_mis`].
pub const BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("brute-force oracle accepts at most {limit} vertices, got {n}")]
    TooLarge { n: usize, limit: usize },
}

/// A vertex set over a fixed universe, stored as membership flags.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MisSet {
    flags: Vec<bool>,
}

impl MisSet {
    pub fn empty(n: usize) -> Self {
        Self {
            flags: vec![false; n],
        }
    }

    pub fn from_members(n: usize, members: impl IntoIterator<Item = VertexId>) -> Self {
        let mut s = Self::empty(n);
        for v in members {
            s.flags[v] = true;
        }
        s
    }

    pub(crate) fn from_flags(flags: Vec<bool>) -> Self {
        Self { flags }
    }

    pub fn universe(&self) -> usize {
        self.flags.len()
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        self.flags[v]
    }

    pub fn insert(&mut self, v: VertexId) {
        self.flags[v] = true;
    }

    pub fn len(&self) -> usize {
        self.flags.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.flags.iter().any(|&b| b)
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.flags
            .iter()
            .enumerate()
            .filter_map(|(v, &b)| b.then_some(v))
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.iter().collect()
    }
}

/// Outcome of [`verify_mis`], with a concrete witness on failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    /// Two adjacent members, `u < v`.
    NotIndependent(VertexId, VertexId),
    /// A non-member with no member neighbor.
    NotMaximal(VertexId),
    /// A member that the mask excludes.
    OutsideMask(VertexId),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

/// Lexicographically-first MIS of `g[mask]`: vertices are visited in
/// increasing id order and join iff no neighbor has joined yet.
pub fn greedy_mis(g: &DynamicGraph, mask: impl Fn(VertexId) -> bool) -> MisSet {
    let n = g.vertex_count();
    let mut flags = vec![false; n];
    let mut work = 0;
    greedy_into(g, (0..n).filter(|&v| mask(v)), &mut flags, &mut work);
    MisSet::from_flags(flags)
}

/// Greedy over `candidates`, which must be ascending. `chosen` must be false
/// on every candidate and on every neighbor that is not a candidate. Charges
/// one unit per adjacency step.
pub(crate) fn greedy_into<N: Neighbors + ?Sized>(
    graph: &N,
    candidates: impl Iterator<Item = VertexId>,
    chosen: &mut [bool],
    work: &mut u64,
) {
    for v in candidates {
        let nbrs = graph.neighbors(v);
        let mut blocked = false;
        for &w in nbrs {
            *work += 1;
            if chosen[w] {
                blocked = true;
                break;
            }
        }
        *work += 1;
        if !blocked {
            chosen[v] = true;
        }
    }
}

/// Checks that `s` is an MIS of `g[mask]`.
pub fn verify_mis(g: &DynamicGraph, s: &MisSet, mask: impl Fn(VertexId) -> bool) -> Verdict {
    let n = g.vertex_count();
    assert_eq!(s.universe(), n, "set and graph disagree on the universe");
    for u in 0..n {
        if !s.contains(u) {
            continue;
        }
        if !mask(u) {
            return Verdict::OutsideMask(u);
        }
    }
    for u in 0..n {
        if !s.contains(u) {
            continue;
        }
        if let Some(&w) = g
            .neighbors(u)
            .iter()
            .filter(|&&w| w > u && s.contains(w))
            .min()
        {
            return Verdict::NotIndependent(u, w);
        }
    }
    for v in 0..n {
        if s.contains(v) || !mask(v) {
            continue;
        }
        if !g.neighbors(v).iter().any(|&w| s.contains(w)) {
            return Verdict::NotMaximal(v);
        }
    }
    Verdict::Valid
}

/// Lexicographically-first MIS by direct simulation of the ordering
/// definition: each vertex rescans every lower-id member with pairwise edge
/// queries. Independent of the neighbor-list walk in [`greedy_mis`].
pub fn brute_force_lex_mis(g: &DynamicGraph) -> Result<MisSet, OracleError> {
    let n = g.vertex_count();
    if n > BRUTE_FORCE_LIMIT {
        return Err(OracleError::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut members: Vec<VertexId> = Vec::new();
    for v in 0..n {
        if members.iter().all(|&w| !g.has_edge(w, v)) {
            members.push(v);
        }
    }
    Ok(MisSet::from_members(n, members))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> DynamicGraph {
        DynamicGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn greedy_examples() {
        assert_eq!(greedy_mis(&path3(), |_| true).to_vec(), vec![0, 2]);
        let empty = DynamicGraph::new(4).unwrap();
        assert_eq!(greedy_mis(&empty, |_| true).to_vec(), vec![0, 1, 2, 3]);
        let tri = DynamicGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(greedy_mis(&tri, |_| true).to_vec(), vec![0]);
        let star = DynamicGraph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(greedy_mis(&star, |v| v != 0).to_vec(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn verify_examples() {
        let g = path3();
        assert_eq!(
            verify_mis(&g, &MisSet::from_members(3, [0, 2]), |_| true),
            Verdict::Valid
        );
        assert_eq!(
            verify_mis(&g, &MisSet::from_members(3, [0, 1]), |_| true),
            Verdict::NotIndependent(0, 1)
        );
        assert_eq!(
            verify_mis(&g, &MisSet::from_members(3, [0]), |_| true),
            Verdict::NotMaximal(2)
        );
        assert_eq!(
            verify_mis(&g, &MisSet::from_members(3, [0, 2]), |v| v != 2),
            Verdict::OutsideMask(2)
        );
        // restricted to {1, 2}, only one of them may be chosen
        assert_eq!(
            verify_mis(&g, &MisSet::from_members(3, [1]), |v| v != 0),
            Verdict::Valid
        );
    }

    #[test]
    fn brute_force_guard_and_empty_graph() {
        let g = DynamicGraph::new(3).unwrap();
        assert_eq!(brute_force_lex_mis(&g).unwrap().to_vec(), vec![0, 1, 2]);
        let big = DynamicGraph::new(BRUTE_FORCE_LIMIT + 1).unwrap();
        assert!(matches!(
            brute_force_lex_mis(&big),
            Err(OracleError::TooLarge { .. })
        ));
    }
}
