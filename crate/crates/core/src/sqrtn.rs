//! The √n algorithm: nested levels of sample-and-prune.
//!
//! Level `r` samples `H̃^r` over all of `V`, keeps `H^r = H̃^r ∩ L^{r-1}`
//! and its greedy MIS `M^r`, and partitions `L^{r-1}` into `H^r`, `I^r`
//! (covered by `M^r`) and `L^r`. Each level graph `G^r = G[L^r]` is stored
//! explicitly; the deepest one lives inside a deterministic engine that
//! maintains `M*`. When a level-`r` phase ends, levels `r..=R` are rebuilt
//! from `G^{r-1}`.

use rand_distr::{Distribution, Geometric};

use crate::det::DetMis;
use crate::graph::{DynamicGraph, GraphError, Neighbors, UpdateEvent, UpdateKind, VertexId};
use crate::induced::InducedGraph;
use crate::meter::{PhaseCause, WorkMeter};
use crate::oracle::{greedy_into, verify_mis, MisSet, Verdict};
use crate::rng::{self, TrialRng};
use crate::DynamicMis;

/// Tolerance for the chain equalities.
pub const CHAIN_TOLERANCE: f64 = 1e-12;

/// Exponents `e_1..e_R` with `Δ_r = n^{e_r}` that balance every term of the
/// cost sum: `2 - 2e_1 = 1 + e_{r-1} - 2e_r = e_R`.
pub fn solve_exponent_chain(levels: usize) -> Vec<f64> {
    assert!(levels >= 1, "the chain needs at least one level");
    // Unrolling e_{r-1} = 2e_r + e_R - 1 gives a closed form; evaluating it
    // directly avoids doubling the rounding error at every level.
    let denom = 2f64.powi(levels as i32 + 1) - 1.0;
    let top = 2f64.powi(levels as i32);
    let e: Vec<f64> = (1..=levels)
        .map(|r| (top - 1.0 + 2f64.powi((levels - r) as i32)) / denom)
        .collect();
    let last = e[levels - 1];
    let terms = chain_terms(&e);
    assert!(
        terms.iter().all(|t| (t - last).abs() <= CHAIN_TOLERANCE),
        "exponent chain does not balance: {terms:?}"
    );
    e
}

/// Log-base-`n` values of every term of the chain, in order: `n²/Δ_1²`,
/// then `nΔ_{r-1}/Δ_r²` for each `r ≥ 2`, then `Δ_R`.
pub fn chain_terms(e: &[f64]) -> Vec<f64> {
    let mut terms = Vec::with_capacity(e.len() + 1);
    terms.push(2.0 - 2.0 * e[0]);
    for r in 1..e.len() {
        terms.push(1.0 + e[r - 1] - 2.0 * e[r]);
    }
    terms.push(e[e.len() - 1]);
    terms
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelParams {
    pub n: usize,
    pub exponents: Vec<f64>,
    /// `n^{e_r}` before rounding.
    pub delta_raw: Vec<f64>,
    pub p: Vec<f64>,
    pub delta: Vec<usize>,
    pub phase_len: Vec<u64>,
    /// Sample-incident updates that end a level phase.
    pub touch_cap: Vec<u64>,
}

impl LevelParams {
    /// Parameters for exactly `levels` levels, without feasibility checks.
    pub fn with_levels(n: usize, levels: usize) -> Self {
        let nf = n as f64;
        let ln_n = nf.ln();
        let exponents = solve_exponent_chain(levels);
        let delta_raw: Vec<f64> = exponents.iter().map(|&e| nf.powf(e)).collect();
        let p: Vec<f64> = delta_raw.iter().map(|&d| 5.0 * ln_n / d).collect();
        Self {
            n,
            delta: delta_raw.iter().map(|&d| d.ceil() as usize).collect(),
            phase_len: p
                .iter()
                .map(|&p| ((1.0 / (24.0 * p * p)).floor() as u64).max(1))
                .collect(),
            touch_cap: p.iter().map(|&p| ((1.0 / p).ceil() as u64).max(1)).collect(),
            exponents,
            delta_raw,
            p,
        }
    }

    pub fn levels(&self) -> usize {
        self.p.len()
    }

    /// `p_r ≥ 2 p_{r-1}`, `p_1 ≥ 1/n` and `p_R ≤ 1`.
    pub fn is_feasible(&self) -> bool {
        let spaced = self.delta_raw.windows(2).all(|w| w[0] >= 2.0 * w[1]);
        spaced && self.p[0] >= 1.0 / self.n as f64 && *self.p.last().unwrap() <= 1.0
    }

    /// `max(1, round(2 log₂ log₂ n))`.
    pub fn target_levels(n: usize) -> usize {
        let ll = (n as f64).log2().log2();
        (2.0 * ll).round().max(1.0) as usize
    }
}

/// Largest feasible level count not above the target, or `None` when even
/// one level is infeasible and the caller should use the baseline.
pub fn make_level_params(n: usize) -> Option<LevelParams> {
    if n < 4 {
        return None;
    }
    (1..=LevelParams::target_levels(n))
        .rev()
        .map(|r| LevelParams::with_levels(n, r))
        .find(LevelParams::is_feasible)
}

#[derive(Debug, Clone)]
struct Levels {
    params: LevelParams,
    depth: usize,
    /// Level holding the vertex in `H` or `I`; `depth + 1` once it is in `L^R`.
    lvl: Vec<u8>,
    is_h: Vec<bool>,
    in_m: Vec<bool>,
    /// `M^r`-neighbor count of an `I^r` vertex.
    cnt: Vec<u32>,
    /// Smallest level whose `H̃` contains the vertex, `depth + 1` if none.
    first: Vec<u8>,
    /// `H̃^r` flags and members, index `r - 1`.
    sampled: Vec<Vec<bool>>,
    sampled_list: Vec<Vec<VertexId>>,
    hits: Vec<Vec<VertexId>>,
    /// `G^1..G^{R-1}`; `G^R` is the star engine's graph.
    graphs: Vec<InducedGraph>,
    star: DetMis,
    age: Vec<u64>,
    touches: Vec<u64>,
    checks: Vec<(usize, VertexId)>,
    scratch: Vec<VertexId>,
    work: u64,
}

/// Adds `members` (ascending) to `target` with their edges in `source`.
fn fill_induced<N: Neighbors + ?Sized>(
    target: &mut InducedGraph,
    source: &N,
    members: &[VertexId],
    work: &mut u64,
    lower: &mut Vec<VertexId>,
) {
    for &v in members {
        lower.clear();
        for &w in source.neighbors(v) {
            if w < v && target.is_active(w) {
                lower.push(w);
            }
        }
        *work += source.degree(v) as u64 + 1;
        target.add_vertex(v, lower);
    }
}

impl Levels {
    fn new(n: usize, params: LevelParams) -> Self {
        let depth = params.levels();
        Self {
            lvl: vec![(depth + 1) as u8; n],
            is_h: vec![false; n],
            in_m: vec![false; n],
            cnt: vec![0; n],
            first: vec![(depth + 1) as u8; n],
            sampled: vec![vec![false; n]; depth],
            sampled_list: vec![Vec::new(); depth],
            hits: vec![Vec::new(); depth],
            graphs: (1..depth).map(|_| InducedGraph::new(n)).collect(),
            star: DetMis::new(n),
            age: vec![0; depth],
            touches: vec![0; depth],
            checks: Vec::new(),
            scratch: Vec::new(),
            work: 0,
            params,
            depth,
        }
    }

    fn deep(&self) -> u8 {
        (self.depth + 1) as u8
    }

    fn level_graph(&self, r: usize) -> &InducedGraph {
        if r == self.depth {
            self.star.graph()
        } else {
            &self.graphs[r - 1]
        }
    }

    /// Neighbors of `v` in `G^r`, with `G^0 = g`.
    fn nbrs<'a>(&'a self, g: &'a DynamicGraph, r: usize, v: VertexId) -> &'a [VertexId] {
        if r == 0 {
            g.neighbors(v)
        } else {
            self.level_graph(r).neighbors(v)
        }
    }

    fn in_level_graph(&self, r: usize, v: VertexId) -> bool {
        self.lvl[v] as usize > r
    }

    fn resample(&mut self, r: usize, rng: &mut TrialRng) {
        let n = self.lvl.len();
        let i = r - 1;
        let mut stale = std::mem::take(&mut self.sampled_list[i]);
        for &v in &stale {
            self.sampled[i][v] = false;
        }
        let mut fresh = Vec::new();
        let p = self.params.p[i].min(1.0);
        let skip = Geometric::new(p).expect("level probability is positive");
        let mut pos = skip.sample(rng);
        while pos < n as u64 {
            let v = pos as usize;
            self.sampled[i][v] = true;
            fresh.push(v);
            pos = pos.saturating_add(1 + skip.sample(rng));
        }
        self.work += (stale.len() + fresh.len()) as u64 + 1;
        stale.extend_from_slice(&fresh);
        for &v in &stale {
            self.first[v] = (1..=self.depth)
                .find(|&l| self.sampled[l - 1][v])
                .unwrap_or(self.depth + 1) as u8;
        }
        self.work += (stale.len() * self.depth) as u64;
        self.sampled_list[i] = fresh;
    }

    fn clear_level_graph(&mut self, r: usize) {
        if r == self.depth {
            self.star.clear();
        } else {
            let gr = &mut self.graphs[r - 1];
            self.work += (gr.vertex_count() + gr.edge_count()) as u64;
            gr.clear();
        }
    }

    fn reset_vertex(&mut self, v: VertexId) {
        self.lvl[v] = self.deep();
        self.is_h[v] = false;
        self.in_m[v] = false;
        self.cnt[v] = 0;
    }

    /// Rebuilds levels `from..=R` on the current graph.
    fn preprocess(&mut self, g: &DynamicGraph, from: usize, rng: &mut TrialRng, meter: &mut WorkMeter) {
        let mut universe: Vec<VertexId> = if from == 1 {
            (0..g.vertex_count()).collect()
        } else {
            let mut u = self.level_graph(from - 1).members().to_vec();
            u.sort_unstable();
            u
        };
        self.work += universe.len() as u64;
        for &v in &universe {
            self.reset_vertex(v);
        }
        for r in from..=self.depth {
            self.clear_level_graph(r);
            self.hits[r - 1].clear();
            self.age[r - 1] = 0;
            self.touches[r - 1] = 0;
        }
        for r in from..=self.depth {
            loop {
                meter.phase_started(r);
                self.resample(r, rng);
                let next = self.build_level(g, r, &universe);
                let delta = self.level_graph(r).max_degree();
                self.work += next.len() as u64;
                if delta <= self.params.delta[r - 1] {
                    universe = next;
                    break;
                }
                meter.observe_delta(delta);
                meter.phase_ended(r, 0, PhaseCause::DegreeCap);
                for &v in &universe {
                    self.reset_vertex(v);
                }
                self.clear_level_graph(r);
                self.hits[r - 1].clear();
            }
        }
    }

    /// Splits `universe = L^{r-1}` (ascending) into `H^r`, `I^r` and `L^r`,
    /// builds `G^r` and returns `L^r`.
    fn build_level(&mut self, g: &DynamicGraph, r: usize, universe: &[VertexId]) -> Vec<VertexId> {
        let i = r - 1;
        let mut hits = std::mem::take(&mut self.hits[i]);
        hits.clear();
        hits.extend(universe.iter().copied().filter(|&v| self.sampled[i][v]));
        for &v in &hits {
            self.lvl[v] = r as u8;
            self.is_h[v] = true;
        }
        let mut in_m = std::mem::take(&mut self.in_m);
        let mut work = 0;
        if r == 1 {
            greedy_into(g, hits.iter().copied(), &mut in_m, &mut work);
        } else {
            greedy_into(self.level_graph(r - 1), hits.iter().copied(), &mut in_m, &mut work);
        }
        self.in_m = in_m;
        self.work += work + universe.len() as u64;
        for &x in &hits {
            if !self.in_m[x] {
                continue;
            }
            let deg = self.nbrs(g, r - 1, x).len();
            for j in 0..deg {
                let w = self.nbrs(g, r - 1, x)[j];
                if !self.sampled[i][w] {
                    self.cnt[w] += 1;
                }
            }
            self.work += deg as u64;
        }
        let mut next = Vec::new();
        for &v in universe {
            if self.sampled[i][v] {
                continue;
            }
            if self.cnt[v] > 0 {
                self.lvl[v] = r as u8;
            } else {
                next.push(v);
            }
        }
        self.hits[i] = hits;

        let mut lower = std::mem::take(&mut self.scratch);
        if r == self.depth {
            if r == 1 {
                self.star.rebuild_from(g, &next);
            } else {
                self.star.rebuild_from(&self.graphs[r - 2], &next);
            }
        } else if r == 1 {
            fill_induced(&mut self.graphs[0], g, &next, &mut self.work, &mut lower);
        } else {
            let (src, dst) = self.graphs.split_at_mut(r - 1);
            fill_induced(&mut dst[0], &src[r - 2], &next, &mut self.work, &mut lower);
        }
        self.scratch = lower;
        next
    }

    fn level_add_vertex(&mut self, r: usize, v: VertexId, nbrs: &[VertexId]) {
        if r == self.depth {
            self.star.activate(v, nbrs);
        } else {
            self.graphs[r - 1].add_vertex(v, nbrs);
            self.work += nbrs.len() as u64 + 1;
        }
    }

    fn level_remove_vertex(&mut self, r: usize, v: VertexId) {
        if r == self.depth {
            self.star.deactivate(v);
        } else {
            self.work += self.graphs[r - 1].degree(v) as u64 + 1;
            self.graphs[r - 1].remove_vertex(v);
        }
    }

    /// Feeds `e` (already applied to `g`) and returns the shallowest level
    /// whose phase ends with it, together with the cause.
    fn update(&mut self, g: &DynamicGraph, e: UpdateEvent) -> Option<(usize, PhaseCause)> {
        let depth = self.depth;
        let none = depth + 1;
        self.work += 1 + depth as u64;
        let (fu, fv) = (self.first[e.u] as usize, self.first[e.v] as usize);

        let r_h = if fu <= depth && fv <= depth { fu.max(fv) } else { none };
        let mut r_i = none;
        for r in fu.min(fv)..=depth {
            self.touches[r - 1] += 1;
            if r_i == none && self.touches[r - 1] >= self.params.touch_cap[r - 1] {
                r_i = r;
            }
        }
        let r_t = (1..=depth)
            .find(|&r| self.age[r - 1] + 1 >= self.params.phase_len[r - 1])
            .unwrap_or(none);
        let stop = r_h.min(r_i).min(r_t);

        self.checks.clear();
        self.process(g, e, stop - 1);
        let mut r_l = none;
        for k in 0..self.checks.len() {
            let (r, x) = self.checks[k];
            if r < r_l && self.in_level_graph(r, x) && self.level_graph(r).degree(x) > self.params.delta[r - 1] {
                r_l = r;
            }
        }
        self.work += self.checks.len() as u64;

        let end = stop.min(r_l);
        for r in 1..end {
            self.age[r - 1] += 1;
        }
        if end > depth {
            return None;
        }
        let cause = if r_t == end {
            PhaseCause::Expired
        } else if r_h == end {
            PhaseCause::SampleHit
        } else if r_i == end {
            PhaseCause::MoveBudget
        } else {
            PhaseCause::DegreeCap
        };
        Some((end, cause))
    }

    /// Runs the update through levels `1..=top`.
    fn process(&mut self, g: &DynamicGraph, e: UpdateEvent, top: usize) {
        if top == 0 {
            return;
        }
        let (mut x, mut y) = (e.u, e.v);
        if self.lvl[x] > self.lvl[y] {
            std::mem::swap(&mut x, &mut y);
        }
        let (a, b) = (self.lvl[x] as usize, self.lvl[y] as usize);

        for r in 1..=(a - 1).min(top) {
            if r == self.depth {
                self.star.edge_update(e);
            } else {
                match e.kind {
                    UpdateKind::Insert => self.graphs[r - 1].add_edge(x, y),
                    UpdateKind::Delete => self.graphs[r - 1].remove_edge(x, y),
                }
                self.work += 1;
            }
            if e.is_insert() {
                self.checks.push((r, x));
                self.checks.push((r, y));
            }
        }
        if a > top || !self.in_m[x] {
            return;
        }
        debug_assert!(!(b == a && self.is_h[y]), "edge inside H^{a} survived");
        self.work += 1;
        if b == a {
            match e.kind {
                UpdateKind::Insert => self.cnt[y] += 1,
                UpdateKind::Delete => {
                    self.cnt[y] -= 1;
                    if self.cnt[y] == 0 {
                        self.descend(g, y, a, top);
                    }
                }
            }
        } else {
            match e.kind {
                UpdateKind::Insert => {
                    debug_assert!(b > top || !self.is_h[y], "sampled vertex left L^{a}");
                    for r in a..=(b - 1).min(top) {
                        self.level_remove_vertex(r, y);
                    }
                    self.lvl[y] = a as u8;
                    self.is_h[y] = false;
                    self.in_m[y] = false;
                    self.cnt[y] = 1;
                }
                UpdateKind::Delete => debug_assert!(false, "L^{a} vertex {y} was adjacent to M^{a}"),
            }
        }
    }

    /// `y` just lost its last `M^a` neighbor: it enters `L^a` and is
    /// classified again at each deeper processed level.
    fn descend(&mut self, g: &DynamicGraph, y: VertexId, a: usize, top: usize) {
        self.lvl[y] = self.deep();
        let mut nbrs = std::mem::take(&mut self.scratch);
        nbrs.clear();
        let deg = self.nbrs(g, a - 1, y).len();
        for j in 0..deg {
            let w = self.nbrs(g, a - 1, y)[j];
            if self.lvl[w] as usize > a {
                nbrs.push(w);
            }
        }
        self.work += deg as u64 + 1;
        for r in a..=top {
            if r > a {
                debug_assert!(!self.sampled[r - 1][y], "sampled vertex {y} entered L^{}", r - 1);
                let covered = nbrs
                    .iter()
                    .filter(|&&w| self.in_m[w] && self.lvl[w] as usize == r)
                    .count() as u32;
                self.work += nbrs.len() as u64;
                if covered > 0 {
                    self.lvl[y] = r as u8;
                    self.cnt[y] = covered;
                    break;
                }
                nbrs.retain(|&w| self.lvl[w] as usize > r);
            }
            self.level_add_vertex(r, y, &nbrs);
            self.checks.push((r, y));
            self.checks.extend(nbrs.iter().map(|&w| (r, w)));
        }
        self.scratch = nbrs;
    }

    fn mis_flags(&self) -> Vec<bool> {
        (0..self.lvl.len())
            .map(|v| self.in_m[v] || self.star.in_mis(v))
            .collect()
    }

    fn audit(&self, g: &DynamicGraph) -> Result<(), String> {
        let n = g.vertex_count();
        let depth = self.depth;
        for v in 0..n {
            let l = self.lvl[v] as usize;
            if l == 0 || l > depth + 1 {
                return Err(format!("vertex {v} has level {l}"));
            }
            if (self.is_h[v] || self.in_m[v]) && l > depth {
                return Err(format!("vertex {v} is in L^R but flagged as sampled"));
            }
            if self.in_m[v] && !self.is_h[v] {
                return Err(format!("vertex {v} is in M but not in H"));
            }
            let first = (1..=depth).find(|&r| self.sampled[r - 1][v]).unwrap_or(depth + 1);
            if first != self.first[v] as usize {
                return Err(format!("first sampled level of {v} is stale"));
            }
        }
        for r in 1..=depth {
            let i = r - 1;
            // frozen-sample stability: H̃^r ∩ L^{r-1} = H^r
            for v in 0..n {
                if self.lvl[v] as usize >= r {
                    let in_h = self.lvl[v] as usize == r && self.is_h[v];
                    if self.sampled[i][v] != in_h {
                        return Err(format!("H̃^{r} ∩ L^{} differs from H^{r} at {v}", r - 1));
                    }
                }
            }
            for &v in &self.hits[i] {
                if !(self.lvl[v] as usize == r && self.is_h[v]) {
                    return Err(format!("H^{r} lists {v} which left it"));
                }
            }
            let in_hr = |v: VertexId| self.lvl[v] as usize == r && self.is_h[v];
            let mr = MisSet::from_members(n, (0..n).filter(|&v| in_hr(v) && self.in_m[v]));
            let verdict = verify_mis(g, &mr, in_hr);
            if verdict != Verdict::Valid {
                return Err(format!("M^{r} is not an MIS of G[H^{r}]: {verdict:?}"));
            }
            for v in 0..n {
                let l = self.lvl[v] as usize;
                if l < r || in_hr(v) {
                    continue;
                }
                let covered = g
                    .neighbors(v)
                    .iter()
                    .filter(|&&w| self.in_m[w] && self.lvl[w] as usize == r)
                    .count() as u32;
                if l == r && (covered == 0 || covered != self.cnt[v]) {
                    return Err(format!(
                        "I^{r} vertex {v}: count {} but recount gives {covered}",
                        self.cnt[v]
                    ));
                }
                if l > r && covered > 0 {
                    return Err(format!("L^{r} vertex {v} has {covered} neighbors in M^{r}"));
                }
            }
            let gr = self.level_graph(r);
            let mut active = 0;
            for v in 0..n {
                let inside = self.lvl[v] as usize > r;
                if gr.is_active(v) != inside {
                    return Err(format!("G^{r} membership of {v} is stale"));
                }
                if !inside {
                    continue;
                }
                active += 1;
                let expected = g.induced_degree(v, |w| self.lvl[w] as usize > r);
                if gr.degree(v) != expected || gr.neighbors(v).iter().any(|&w| !g.has_edge(v, w)) {
                    return Err(format!("G^{r} adjacency of {v} differs from G[L^{r}]"));
                }
                if gr.degree(v) > self.params.delta[i] {
                    return Err(format!(
                        "degree {} of {v} in G^{r} exceeds Δ_{r} = {}",
                        gr.degree(v),
                        self.params.delta[i]
                    ));
                }
            }
            if active != gr.vertex_count() {
                return Err(format!("G^{r} has extra vertices"));
            }
            if self.touches[i] >= self.params.touch_cap[i] {
                return Err(format!("level {r} touched budget exhausted without restart"));
            }
            if self.age[i] >= self.params.phase_len[i] {
                return Err(format!("level {r} outlived its length"));
            }
        }
        self.star.audit()
    }
}

#[derive(Debug, Clone)]
enum Engine {
    Nested(Box<Levels>),
    /// Too few vertices for any feasible level structure.
    Flat(Box<DetMis>),
}

#[derive(Debug, Clone)]
pub struct SqrtN {
    graph: DynamicGraph,
    engine: Engine,
    rng: TrialRng,
    meter: WorkMeter,
}

impl SqrtN {
    pub fn new(n: usize, seed: u64) -> Result<Self, GraphError> {
        let graph = DynamicGraph::new(n)?;
        let mut rng = rng::stream(seed, rng::ALGORITHM_STREAM);
        let (engine, meter) = match make_level_params(n) {
            Some(params) => {
                let mut meter = WorkMeter::new(params.levels());
                let mut levels = Levels::new(n, params);
                levels.preprocess(&graph, 1, &mut rng, &mut meter);
                (Engine::Nested(Box::new(levels)), meter)
            }
            None => (Engine::Flat(Box::new(DetMis::init(&graph, |_| true))), WorkMeter::new(0)),
        };
        Ok(Self {
            graph,
            engine,
            rng,
            meter,
        })
    }

    /// `None` when the baseline is used instead of levels.
    pub fn params(&self) -> Option<&LevelParams> {
        match &self.engine {
            Engine::Nested(l) => Some(&l.params),
            Engine::Flat(_) => None,
        }
    }

    /// Vertices of `G^r`, sorted.
    pub fn level_vertices(&self, r: usize) -> Vec<VertexId> {
        match &self.engine {
            Engine::Nested(l) => {
                let mut v = l.level_graph(r).members().to_vec();
                v.sort_unstable();
                v
            }
            Engine::Flat(_) => Vec::new(),
        }
    }

    fn max_level_delta(levels: &Levels) -> usize {
        (1..=levels.depth)
            .map(|r| levels.level_graph(r).max_degree())
            .max()
            .unwrap_or(0)
    }
}

impl DynamicMis for SqrtN {
    fn update(&mut self, e: UpdateEvent) -> Result<(), GraphError> {
        self.graph.apply(e)?;
        self.meter.updates += 1;
        match &mut self.engine {
            Engine::Flat(det) => det.edge_update(e),
            Engine::Nested(levels) => {
                if let Some((end, cause)) = levels.update(&self.graph, e) {
                    self.meter.observe_delta(Self::max_level_delta(levels));
                    self.meter.phase_ended(end, levels.age[end - 1] + 1, cause);
                    for r in end + 1..=levels.depth {
                        self.meter.phase_ended(r, levels.age[r - 1] + 1, PhaseCause::Parent);
                    }
                    levels.preprocess(&self.graph, end, &mut self.rng, &mut self.meter);
                }
            }
        }
        Ok(())
    }

    fn graph(&self) -> &DynamicGraph {
        &self.graph
    }

    fn mis(&self) -> MisSet {
        match &self.engine {
            Engine::Nested(l) => MisSet::from_flags(l.mis_flags()),
            Engine::Flat(det) => det.mis(),
        }
    }

    fn meter(&self) -> WorkMeter {
        let mut m = self.meter.clone();
        m.work_units = match &self.engine {
            Engine::Nested(l) => l.work + l.star.work(),
            Engine::Flat(det) => det.work(),
        };
        m
    }

    fn audit(&self) -> Result<(), String> {
        match &self.engine {
            Engine::Nested(l) => l.audit(&self.graph),
            Engine::Flat(det) => det.audit(),
        }
    }
}

pub fn sqrtn_run(
    n: usize,
    updates: &[UpdateEvent],
    seed: u64,
) -> Result<(MisSet, WorkMeter), GraphError> {
    let mut algo = SqrtN::new(n, seed)?;
    for &e in updates {
        algo.update(e)?;
    }
    Ok((algo.mis(), algo.meter()))
}
