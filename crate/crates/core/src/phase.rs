//! Single-level phase state shared by the n^{2/3} and m^{1/3} algorithms.
//!
//! A phase freezes a random sample `H` and its greedy MIS `M_H`. Every other
//! vertex is either covered by `M_H` (label `I`) or left over (label `L`);
//! the deterministic engine maintains an MIS of `G[L]`. The combined set
//! `M_H ∪ MIS(G[L])` is maximal in the whole graph for as long as no edge
//! inside `H` changes.

use rand::Rng;
use rustc_hash::FxHashMap;

use crate::det::DetMis;
use crate::graph::{DynamicGraph, Neighbors, UpdateEvent, UpdateKind, VertexId};
use crate::meter::PhaseCause;
use crate::oracle::{greedy_into, verify_mis, MisSet, Verdict};
use crate::rng::TrialRng;

/// Natural log with a floor of 1, so thresholds stay positive on tiny inputs.
pub(crate) fn ln_floor(x: f64) -> f64 {
    x.ln().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseParams {
    pub p: f64,
    /// Updates a phase may consume before it expires.
    pub phase_len: u64,
    /// Largest degree allowed inside `G[L]`.
    pub delta_cap: usize,
    /// Number of `I -> L` moves that ends the phase.
    pub i_move_cap: u64,
}

impl PhaseParams {
    /// Thresholds for an explicit sampling probability on `n` vertices.
    pub fn with_probability(n: usize, p: f64) -> Self {
        let p = p.clamp(0.0, 1.0);
        if p == 0.0 {
            return Self {
                p,
                phase_len: u64::MAX,
                delta_cap: usize::MAX,
                i_move_cap: u64::MAX,
            };
        }
        Self {
            p,
            phase_len: ((1.0 / (6.0 * p * p)).floor() as u64).max(1),
            delta_cap: (5.0 * ln_floor(n as f64) / p).floor() as usize,
            i_move_cap: ((2.0 / p).ceil() as u64).max(1),
        }
    }

    /// `p = (ln n)^{1/3} / n^{2/3}`.
    pub fn for_vertices(n: usize) -> Self {
        let nf = n as f64;
        let p = ln_floor(nf).cbrt() / nf.powf(2.0 / 3.0);
        Self::with_probability(n, p.min(1.0))
    }

    /// Thresholds derived from an edge-count anchor: `p = m^{-1/3}`.
    pub fn for_edges(m_est: usize) -> Self {
        let m = m_est.max(1) as f64;
        let third = m.cbrt();
        Self {
            p: 1.0 / third,
            phase_len: ((third * third / 6.0).floor() as u64).max(1),
            delta_cap: (5.0 * third * ln_floor(m)).floor() as usize,
            i_move_cap: (third.ceil() as u64).max(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    /// In the frozen sample.
    H,
    /// Not sampled, adjacent to `M_H`.
    I,
    /// Not sampled, no neighbor in `M_H`; lives in the low engine.
    L,
    /// Isolated at phase start and not yet touched; its coin is drawn on
    /// its first insertion. Implicitly in the MIS.
    Unsampled,
}

/// Outcome of feeding one update to a phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Continued,
    PhaseEnded(PhaseCause),
    EpochEnded,
}

/// Explicit `L`-neighbor lists for the high-degree vertices of a phase.
#[derive(Debug, Clone, Default)]
struct HighIndex {
    members: Vec<VertexId>,
    slot: Vec<u32>,
    lists: Vec<Vec<VertexId>>,
    pos: FxHashMap<(u32, VertexId), u32>,
}

impl HighIndex {
    fn new(n: usize) -> Self {
        Self {
            slot: vec![u32::MAX; n],
            ..Self::default()
        }
    }

    fn clear(&mut self) {
        for &h in &self.members {
            self.slot[h] = u32::MAX;
        }
        self.members.clear();
        self.lists.clear();
        self.pos.clear();
    }

    fn is_high(&self, v: VertexId) -> bool {
        self.slot[v] != u32::MAX
    }

    fn add_member(&mut self, h: VertexId) {
        self.slot[h] = self.members.len() as u32;
        self.members.push(h);
        self.lists.push(Vec::new());
    }

    fn insert(&mut self, h: VertexId, w: VertexId) {
        let s = self.slot[h];
        let list = &mut self.lists[s as usize];
        if let std::collections::hash_map::Entry::Vacant(e) = self.pos.entry((s, w)) {
            e.insert(list.len() as u32);
            list.push(w);
        }
    }

    fn remove(&mut self, h: VertexId, w: VertexId) {
        let s = self.slot[h];
        if let Some(idx) = self.pos.remove(&(s, w)) {
            let list = &mut self.lists[s as usize];
            list.swap_remove(idx as usize);
            if let Some(&moved) = list.get(idx as usize) {
                self.pos.insert((s, moved), idx);
            }
        }
    }

    fn list(&self, h: VertexId) -> &[VertexId] {
        &self.lists[self.slot[h] as usize]
    }
}

/// How a phase draws its sample and maintains `L`-neighborhoods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct PhaseMode {
    /// Draw coins only for non-isolated vertices; the rest on first insertion.
    pub lazy: bool,
    /// Phase-start degree at or above which a vertex keeps an explicit list
    /// of its `L`-neighbors. `None` disables the split.
    pub high_threshold: Option<f64>,
    /// Degree bound asserted for non-high vertices during the phase.
    pub low_degree_bound: Option<f64>,
}

impl PhaseMode {
    pub const EAGER: Self = Self {
        lazy: false,
        high_threshold: None,
        low_degree_bound: None,
    };
}

#[derive(Debug, Clone)]
pub struct PhaseState {
    params: PhaseParams,
    mode: PhaseMode,
    label: Vec<Label>,
    in_mh: Vec<bool>,
    mh_count: Vec<u32>,
    low: DetMis,
    high: HighIndex,
    i_to_l_moves: u64,
    age: u64,
    dirty: Vec<VertexId>,
    is_dirty: Vec<bool>,
    touched: Vec<VertexId>,
    scratch: Vec<VertexId>,
    work: u64,
}

impl PhaseState {
    pub(crate) fn new(n: usize, params: PhaseParams, mode: PhaseMode) -> Self {
        Self {
            params,
            mode,
            label: vec![Label::Unsampled; n],
            in_mh: vec![false; n],
            mh_count: vec![0; n],
            low: DetMis::new(n),
            high: HighIndex::new(n),
            i_to_l_moves: 0,
            age: 0,
            dirty: Vec::new(),
            is_dirty: vec![false; n],
            touched: Vec::new(),
            scratch: Vec::new(),
            work: 0,
        }
    }

    pub fn params(&self) -> &PhaseParams {
        &self.params
    }

    /// Takes effect at the next `start`.
    pub(crate) fn set_mode(&mut self, mode: PhaseMode) {
        self.mode = mode;
    }

    pub fn label(&self, v: VertexId) -> Label {
        self.label[v]
    }

    pub fn in_mh(&self, v: VertexId) -> bool {
        self.in_mh[v]
    }

    pub fn mh_count(&self, v: VertexId) -> u32 {
        self.mh_count[v]
    }

    pub fn low_engine(&self) -> &DetMis {
        &self.low
    }

    /// Updates consumed by the running phase.
    pub fn age(&self) -> u64 {
        self.age
    }

    pub fn i_to_l_moves(&self) -> u64 {
        self.i_to_l_moves
    }

    pub fn high_vertices(&self) -> &[VertexId] {
        &self.high.members
    }

    pub fn work(&self) -> u64 {
        self.work + self.low.work()
    }

    #[inline]
    fn touch(&mut self, v: VertexId) {
        if !self.is_dirty[v] {
            self.is_dirty[v] = true;
            self.dirty.push(v);
        }
    }

    /// Forgets the previous phase in time proportional to what it touched.
    fn reset(&mut self) {
        for &v in &self.dirty {
            self.label[v] = Label::Unsampled;
            self.in_mh[v] = false;
            self.mh_count[v] = 0;
            self.is_dirty[v] = false;
        }
        self.work += self.dirty.len() as u64;
        self.dirty.clear();
        self.low.clear();
        self.high.clear();
        self.touched.clear();
        self.i_to_l_moves = 0;
        self.age = 0;
    }

    /// Starts a fresh phase on `g`, possibly with new thresholds. Returns
    /// false when the initial `G[L]` already breaks the degree cap.
    pub(crate) fn start(&mut self, g: &DynamicGraph, params: PhaseParams, rng: &mut TrialRng) -> bool {
        self.reset();
        self.params = params;
        let p = params.p;
        let n = g.vertex_count();

        let mut sampled = std::mem::take(&mut self.scratch);
        sampled.clear();
        if self.mode.lazy {
            for &v in g.non_isolated() {
                if rng.gen_bool(p) {
                    sampled.push(v);
                }
            }
            self.work += g.non_isolated().len() as u64;
        } else {
            for v in 0..n {
                if rng.gen_bool(p) {
                    sampled.push(v);
                }
            }
            self.work += n as u64;
        }
        sampled.sort_unstable();
        for &v in &sampled {
            self.label[v] = Label::H;
            self.touch(v);
        }
        greedy_into(g, sampled.iter().copied(), &mut self.in_mh, &mut self.work);
        for &x in &sampled {
            if !self.in_mh[x] {
                continue;
            }
            for &w in g.neighbors(x) {
                if self.label[w] != Label::H {
                    self.mh_count[w] += 1;
                    self.touch(w);
                }
            }
            self.work += g.degree(x) as u64;
        }

        let mut lows = sampled;
        lows.clear();
        let mut classify = |this: &mut Self, v: VertexId| {
            if this.label[v] == Label::H {
                return;
            }
            this.touch(v);
            if this.mh_count[v] > 0 {
                this.label[v] = Label::I;
            } else {
                this.label[v] = Label::L;
                lows.push(v);
            }
        };
        if self.mode.lazy {
            for i in 0..g.non_isolated().len() {
                classify(self, g.non_isolated()[i]);
            }
        } else {
            for v in 0..n {
                classify(self, v);
            }
        }
        lows.sort_unstable();
        self.work += lows.len() as u64;
        self.low.rebuild_from(g, &lows);
        self.scratch = lows;

        if let Some(threshold) = self.mode.high_threshold {
            for &h in g.non_isolated() {
                if g.degree(h) as f64 >= threshold {
                    self.high.add_member(h);
                    for &w in g.neighbors(h) {
                        if self.label[w] == Label::L {
                            self.high.insert(h, w);
                        }
                    }
                    self.work += g.degree(h) as u64;
                }
            }
            self.work += g.non_isolated().len() as u64;
        }

        let delta = self.low.graph().max_degree();
        self.work += self.low.graph().vertex_count() as u64;
        delta <= self.params.delta_cap
    }

    /// Largest degree currently present in `G[L]`.
    pub fn low_max_degree(&self) -> usize {
        self.low.graph().max_degree()
    }

    /// Processes `e`, which `g` must already reflect. Returns the cause when
    /// the phase ends; the state is then stale until the next `start`.
    pub(crate) fn process(
        &mut self,
        g: &DynamicGraph,
        e: UpdateEvent,
        rng: &mut TrialRng,
    ) -> Option<PhaseCause> {
        let (u, v) = (e.u, e.v);
        self.work += 1;
        self.age += 1;
        let expired = self.age >= self.params.phase_len;

        if self.mode.lazy && e.is_insert() {
            for x in [u, v] {
                if self.label[x] == Label::Unsampled {
                    self.draw_lazy(x, rng);
                }
            }
        }
        debug_assert!(self.label[u] != Label::Unsampled && self.label[v] != Label::Unsampled);

        let (lu, lv) = (self.label[u], self.label[v]);
        if lu == Label::H && lv == Label::H {
            return Some(if expired {
                PhaseCause::Expired
            } else {
                PhaseCause::SampleHit
            });
        }

        if self.mode.high_threshold.is_some() {
            for (x, y) in [(u, v), (v, u)] {
                if self.high.is_high(x) && self.label[y] == Label::L {
                    self.work += 1;
                    match e.kind {
                        UpdateKind::Insert => self.high.insert(x, y),
                        UpdateKind::Delete => self.high.remove(x, y),
                    }
                }
            }
        }

        match (lu, lv) {
            (Label::L, Label::L) => {
                self.low.edge_update(e);
                if e.is_insert() {
                    self.touched.extend([u, v]);
                }
            }
            (Label::H, _) | (_, Label::H) => {
                let (h, y) = if lu == Label::H { (u, v) } else { (v, u) };
                if self.in_mh[h] {
                    self.sample_edge(g, e.kind, y);
                }
            }
            _ => {}
        }

        if expired {
            self.touched.clear();
            return Some(PhaseCause::Expired);
        }
        if self.i_to_l_moves >= self.params.i_move_cap {
            self.touched.clear();
            return Some(PhaseCause::MoveBudget);
        }
        let cap = self.params.delta_cap;
        let over = self
            .touched
            .iter()
            .any(|&x| self.low.is_active(x) && self.low.graph().degree(x) > cap);
        self.work += self.touched.len() as u64;
        self.touched.clear();
        over.then_some(PhaseCause::DegreeCap)
    }

    /// An edge between an `M_H` vertex and `y` changed.
    fn sample_edge(&mut self, g: &DynamicGraph, kind: UpdateKind, y: VertexId) {
        self.work += 1;
        match (self.label[y], kind) {
            (Label::I, UpdateKind::Insert) => self.mh_count[y] += 1,
            (Label::I, UpdateKind::Delete) => {
                self.mh_count[y] -= 1;
                if self.mh_count[y] == 0 {
                    self.move_to_low(g, y);
                }
            }
            (Label::L, UpdateKind::Insert) => {
                self.mh_count[y] = 1;
                self.move_to_inner(y);
            }
            (Label::L, UpdateKind::Delete) => {
                debug_assert!(false, "L-vertex {y} was adjacent to M_H");
            }
            _ => {}
        }
    }

    fn draw_lazy(&mut self, x: VertexId, rng: &mut TrialRng) {
        self.work += 1;
        self.touch(x);
        if rng.gen_bool(self.params.p) {
            // isolated until now, so it joins M_H as if sampled at phase start
            self.label[x] = Label::H;
            self.in_mh[x] = true;
        } else {
            self.label[x] = Label::L;
            self.low.activate(x, &[]);
        }
    }

    fn move_to_low(&mut self, g: &DynamicGraph, y: VertexId) {
        self.label[y] = Label::L;
        self.i_to_l_moves += 1;
        let mut nbrs = std::mem::take(&mut self.scratch);
        nbrs.clear();
        if self.high.is_high(y) {
            nbrs.extend_from_slice(self.high.list(y));
            self.work += nbrs.len() as u64;
        } else {
            if let Some(bound) = self.mode.low_degree_bound {
                assert!(
                    g.degree(y) as f64 <= bound,
                    "low vertex {y} has degree {} above {bound}",
                    g.degree(y)
                );
            }
            for &w in g.neighbors(y) {
                if self.label[w] == Label::L && w != y {
                    nbrs.push(w);
                }
            }
            self.work += g.degree(y) as u64;
        }
        self.low.activate(y, &nbrs);
        self.touched.push(y);
        self.touched.extend_from_slice(&nbrs);
        self.scratch = nbrs;

        if self.mode.high_threshold.is_some() {
            for i in 0..self.high.members.len() {
                let h = self.high.members[i];
                if g.has_edge(h, y) {
                    self.high.insert(h, y);
                }
            }
            self.work += self.high.members.len() as u64;
        }
    }

    fn move_to_inner(&mut self, y: VertexId) {
        self.label[y] = Label::I;
        self.low.deactivate(y);
        if self.mode.high_threshold.is_some() {
            for i in 0..self.high.members.len() {
                let h = self.high.members[i];
                self.high.remove(h, y);
            }
            self.work += self.high.members.len() as u64;
        }
    }

    /// `M_H ∪ MIS(G[L])`, plus the implicit members that are still unsampled.
    pub fn current_mis(&self) -> MisSet {
        let flags = (0..self.label.len())
            .map(|v| {
                self.in_mh[v] || self.low.in_mis(v) || self.label[v] == Label::Unsampled
            })
            .collect();
        MisSet::from_flags(flags)
    }

    /// Recomputes every derived quantity from `g` and compares.
    pub fn audit(&self, g: &DynamicGraph) -> Result<(), String> {
        let n = g.vertex_count();
        for v in 0..n {
            let label = self.label[v];
            if self.in_mh[v] && label != Label::H {
                return Err(format!("vertex {v} is in M_H with label {label:?}"));
            }
            match label {
                Label::Unsampled => {
                    if !self.mode.lazy || g.degree(v) != 0 {
                        return Err(format!("vertex {v} unsampled with degree {}", g.degree(v)));
                    }
                }
                Label::H => {}
                Label::I | Label::L => {
                    let count = g.neighbors(v).iter().filter(|&&w| self.in_mh[w]).count() as u32;
                    if count != self.mh_count[v] {
                        return Err(format!(
                            "vertex {v}: M_H-neighbor count {} but recount gives {count}",
                            self.mh_count[v]
                        ));
                    }
                    if (label == Label::I) != (count > 0) {
                        return Err(format!("vertex {v} labeled {label:?} with {count} M_H neighbors"));
                    }
                }
            }
            if self.low.is_active(v) != (label == Label::L) {
                return Err(format!("vertex {v}: engine activity disagrees with label {label:?}"));
            }
        }
        let mh = MisSet::from_flags(self.in_mh.clone());
        let verdict = verify_mis(g, &mh, |v| self.label[v] == Label::H);
        if verdict != Verdict::Valid {
            return Err(format!("M_H is not an MIS of G[H]: {verdict:?}"));
        }
        let low = self.low.graph();
        for &v in low.members() {
            let expected = g.induced_degree(v, |w| self.label[w] == Label::L);
            if low.degree(v) != expected || low.neighbors(v).iter().any(|&w| !g.has_edge(v, w)) {
                return Err(format!("low-engine adjacency of {v} differs from G[L]"));
            }
            if low.degree(v) > self.params.delta_cap {
                return Err(format!(
                    "degree {} of {v} in G[L] exceeds cap {}",
                    low.degree(v),
                    self.params.delta_cap
                ));
            }
        }
        self.low.audit()?;
        if self.i_to_l_moves > self.params.i_move_cap {
            return Err(format!("{} I->L moves above cap", self.i_to_l_moves));
        }
        for &h in &self.high.members {
            let mut have = self.high.list(h).to_vec();
            have.sort_unstable();
            let mut want: Vec<VertexId> = g
                .neighbors(h)
                .iter()
                .copied()
                .filter(|&w| self.label[w] == Label::L)
                .collect();
            want.sort_unstable();
            if have != want {
                return Err(format!("L-neighbor list of high vertex {h} is stale"));
            }
        }
        Ok(())
    }
}
