//! Oblivious update sequences and the text format used to store them.
//!
//! A sequence is a pure function of `(family, n, K, seed)`: it is fixed
//! before any algorithm runs and never sees the algorithm's coins.

use std::fmt;
use std::io::{self, BufRead, Write};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Geometric};
use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::graph::{UpdateEvent, UpdateKind, VertexId};
use crate::rng::{self, TrialRng};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WorkloadError {
    #[error("workloads need at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("edge probability {0} is outside (0, 1]")]
    BadProbability(f64),
    #[error("window {window} exceeds the {pairs} vertex pairs")]
    WindowTooLarge { window: usize, pairs: usize },
    #[error("hot set of {size} vertices with fraction {fraction} is invalid for n = {n}")]
    BadHotSet { size: usize, fraction: f64, n: usize },
    #[error("clique size {k} must lie in 2..={n}")]
    BadClique { k: usize, n: usize },
    #[error("unknown workload family `{0}`")]
    UnknownFamily(String),
    #[error("update {index} ({event}) is not valid against the current edge set")]
    IllFormed { index: usize, event: UpdateEvent },
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// Toggle a uniformly random pair.
    UniformToggle,
    /// Insert a fresh `G(n, p)` in random order, then delete it, repeatedly.
    ErBuildTeardown(f64),
    /// Keep the last `window` inserted edges: once full, every insertion is
    /// preceded by deleting the oldest edge.
    SlidingWindow(usize),
    /// Toggle pairs touching a fixed random hot set with the given
    /// probability, uniform pairs otherwise.
    HubAttack { size: usize, fraction: f64 },
    /// Build a clique on random vertices, tear it down, repeat.
    CliqueCycle(usize),
}

impl Family {
    pub const NAMES: [&'static str; 5] = ["uniform", "er", "window", "hub", "clique"];

    /// The family called `name` with parameters scaled to `n`.
    pub fn with_defaults(name: &str, n: usize) -> Result<Self, WorkloadError> {
        let root = (n as f64).sqrt().ceil() as usize;
        Ok(match name {
            "uniform" => Family::UniformToggle,
            "er" => Family::ErBuildTeardown((8.0 / n as f64).min(1.0)),
            "window" => Family::SlidingWindow((2 * n).min(pairs(n))),
            "hub" => Family::HubAttack {
                size: root.clamp(1, n),
                fraction: 0.5,
            },
            "clique" => Family::CliqueCycle(root.clamp(2, n)),
            other => return Err(WorkloadError::UnknownFamily(other.to_string())),
        })
    }

    /// Parses `name` or `name:params`, filling missing parameters from `n`.
    /// Parameters are `er:P`, `window:W`, `hub:SIZE:FRACTION`, `clique:K`.
    pub fn parse(s: &str, n: usize) -> Result<Self, WorkloadError> {
        let mut parts = s.split(':');
        let name = parts.next().unwrap_or_default();
        let args: Vec<&str> = parts.collect();
        if args.is_empty() {
            return Self::with_defaults(name, n);
        }
        let bad = || WorkloadError::UnknownFamily(s.to_string());
        let num = |i: usize| args.get(i).and_then(|a| a.parse::<f64>().ok()).ok_or_else(bad);
        let int = |i: usize| args.get(i).and_then(|a| a.parse::<usize>().ok()).ok_or_else(bad);
        Ok(match (name, args.len()) {
            ("er", 1) => Family::ErBuildTeardown(num(0)?),
            ("window", 1) => Family::SlidingWindow(int(0)?),
            ("hub", 2) => Family::HubAttack {
                size: int(0)?,
                fraction: num(1)?,
            },
            ("clique", 1) => Family::CliqueCycle(int(0)?),
            _ => return Err(bad()),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::UniformToggle => "uniform",
            Family::ErBuildTeardown(_) => "er",
            Family::SlidingWindow(_) => "window",
            Family::HubAttack { .. } => "hub",
            Family::CliqueCycle(_) => "clique",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::UniformToggle => write!(f, "uniform"),
            Family::ErBuildTeardown(p) => write!(f, "er:{p}"),
            Family::SlidingWindow(w) => write!(f, "window:{w}"),
            Family::HubAttack { size, fraction } => write!(f, "hub:{size}:{fraction}"),
            Family::CliqueCycle(k) => write!(f, "clique:{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkloadSpec {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    pub seed: u64,
}

fn pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

impl WorkloadSpec {
    pub fn new(family: Family, n: usize, k: usize, seed: u64) -> Self {
        Self { family, n, k, seed }
    }

    pub fn validate(&self) -> Result<(), WorkloadError> {
        let n = self.n;
        if n < 2 {
            return Err(WorkloadError::TooFewVertices(n));
        }
        match self.family {
            Family::UniformToggle => {}
            Family::ErBuildTeardown(p) => {
                if !(p > 0.0 && p <= 1.0) {
                    return Err(WorkloadError::BadProbability(p));
                }
            }
            Family::SlidingWindow(window) => {
                if window == 0 || window > pairs(n) {
                    return Err(WorkloadError::WindowTooLarge {
                        window,
                        pairs: pairs(n),
                    });
                }
            }
            Family::HubAttack { size, fraction } => {
                if size == 0 || size > n || !(0.0..=1.0).contains(&fraction) {
                    return Err(WorkloadError::BadHotSet { size, fraction, n });
                }
            }
            Family::CliqueCycle(k) => {
                if k < 2 || k > n {
                    return Err(WorkloadError::BadClique { k, n });
                }
            }
        }
        Ok(())
    }
}

/// Edge-presence tracker shared by the generators.
#[derive(Default)]
struct Presence {
    edges: FxHashSet<(VertexId, VertexId)>,
    out: Vec<UpdateEvent>,
}

impl Presence {
    fn toggle(&mut self, a: VertexId, b: VertexId) {
        let key = (a.min(b), a.max(b));
        let kind = if self.edges.remove(&key) {
            UpdateKind::Delete
        } else {
            self.edges.insert(key);
            UpdateKind::Insert
        };
        self.out.push(UpdateEvent::new(kind, a, b));
    }
}

fn uniform_pair(rng: &mut TrialRng, n: usize) -> (VertexId, VertexId) {
    let u = rng.gen_range(0..n);
    let mut v = rng.gen_range(0..n - 1);
    if v >= u {
        v += 1;
    }
    (u, v)
}

/// Exactly `spec.k` well-formed events starting from the empty graph.
pub fn generate(spec: &WorkloadSpec) -> Result<Vec<UpdateEvent>, WorkloadError> {
    spec.validate()?;
    let (n, k) = (spec.n, spec.k);
    let mut rng = rng::stream(spec.seed, rng::WORKLOAD_STREAM);
    let mut state = Presence::default();
    state.out.reserve(k);
    match spec.family {
        Family::UniformToggle => {
            while state.out.len() < k {
                let (u, v) = uniform_pair(&mut rng, n);
                state.toggle(u, v);
            }
        }
        Family::ErBuildTeardown(p) => {
            while state.out.len() < k {
                let mut edges = er_edges(&mut rng, n, p);
                edges.shuffle(&mut rng);
                for &(u, v) in &edges {
                    state.toggle(u, v);
                }
                edges.shuffle(&mut rng);
                for &(u, v) in &edges {
                    state.toggle(u, v);
                }
            }
        }
        Family::SlidingWindow(window) => {
            let mut fifo = std::collections::VecDeque::with_capacity(window);
            while state.out.len() < k {
                if fifo.len() == window {
                    let (u, v) = fifo.pop_front().expect("window is full");
                    state.toggle(u, v);
                    continue;
                }
                let (u, v) = loop {
                    let (u, v) = uniform_pair(&mut rng, n);
                    if !state.edges.contains(&(u.min(v), u.max(v))) {
                        break (u, v);
                    }
                };
                state.toggle(u, v);
                fifo.push_back((u, v));
            }
        }
        Family::HubAttack { size, fraction } => {
            let mut all: Vec<VertexId> = (0..n).collect();
            let (hot, _) = all.partial_shuffle(&mut rng, size);
            let hot = hot.to_vec();
            while state.out.len() < k {
                let (u, v) = if rng.gen_bool(fraction) {
                    let u = hot[rng.gen_range(0..hot.len())];
                    let mut v = rng.gen_range(0..n - 1);
                    if v >= u {
                        v += 1;
                    }
                    (u, v)
                } else {
                    uniform_pair(&mut rng, n)
                };
                state.toggle(u, v);
            }
        }
        Family::CliqueCycle(size) => {
            let mut all: Vec<VertexId> = (0..n).collect();
            while state.out.len() < k {
                let (clique, _) = all.partial_shuffle(&mut rng, size);
                let mut edges = Vec::with_capacity(size * (size - 1) / 2);
                for i in 0..size {
                    for j in i + 1..size {
                        edges.push((clique[i], clique[j]));
                    }
                }
                for &(u, v) in &edges {
                    state.toggle(u, v);
                }
                for &(u, v) in edges.iter().rev() {
                    state.toggle(u, v);
                }
            }
        }
    }
    let mut out = state.out;
    out.truncate(k);
    Ok(out)
}

/// Edges of one `G(n, p)` sample in lexicographic order; never empty.
fn er_edges(rng: &mut TrialRng, n: usize, p: f64) -> Vec<(VertexId, VertexId)> {
    let total = pairs(n) as u64;
    let skip = Geometric::new(p).expect("probability validated");
    loop {
        let mut edges = Vec::new();
        let mut idx = skip.sample(rng);
        while idx < total {
            edges.push(pair_at(n, idx));
            idx = idx.saturating_add(1 + skip.sample(rng));
        }
        if !edges.is_empty() {
            return edges;
        }
    }
}

/// The `idx`-th pair `(u, v)`, `u < v`, in lexicographic order.
fn pair_at(n: usize, idx: u64) -> (VertexId, VertexId) {
    let n = n as u64;
    // row u starts at u*n - u*(u+1)/2
    let start = |u: u64| u * n - u * (u + 1) / 2;
    let (mut lo, mut hi) = (0u64, n - 1);
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if start(mid) <= idx {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = lo;
    let v = u + 1 + (idx - start(u));
    (u as VertexId, v as VertexId)
}

/// Replays `updates` against an empty graph on `n` vertices.
pub fn check_well_formed(n: usize, updates: &[UpdateEvent]) -> Result<(), WorkloadError> {
    let mut edges = FxHashSet::default();
    for (index, &e) in updates.iter().enumerate() {
        let ok = e.v < n
            && match e.kind {
                UpdateKind::Insert => edges.insert((e.u, e.v)),
                UpdateKind::Delete => edges.remove(&(e.u, e.v)),
            };
        if !ok {
            return Err(WorkloadError::IllFormed { index, event: e });
        }
    }
    Ok(())
}

pub fn write_updates(n: usize, updates: &[UpdateEvent], mut sink: impl Write) -> io::Result<()> {
    writeln!(sink, "n {n}")?;
    for e in updates {
        writeln!(sink, "{e}")?;
    }
    sink.flush()
}

pub fn read_updates(source: impl BufRead) -> Result<(usize, Vec<UpdateEvent>), ParseError> {
    let mut lines = source.lines();
    let syntax = |line: usize, reason: &str| ParseError::Syntax {
        line,
        reason: reason.to_string(),
    };
    let header = lines.next().ok_or_else(|| syntax(1, "missing `n <N>` header"))??;
    let n = header
        .strip_prefix("n ")
        .and_then(|s| s.parse::<usize>().ok())
        .ok_or_else(|| syntax(1, "expected `n <N>`"))?;
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        let mut fields = line.split(' ');
        let kind = match fields.next() {
            Some("+") => UpdateKind::Insert,
            Some("-") => UpdateKind::Delete,
            _ => return Err(syntax(line_no, "expected `+` or `-`")),
        };
        let mut endpoint = || {
            fields
                .next()
                .and_then(|f| f.parse::<VertexId>().ok())
                .ok_or_else(|| syntax(line_no, "expected two vertex ids"))
        };
        let (u, v) = (endpoint()?, endpoint()?);
        if fields.next().is_some() {
            return Err(syntax(line_no, "trailing fields"));
        }
        if u >= v {
            return Err(syntax(line_no, "endpoints must satisfy u < v"));
        }
        if v >= n {
            return Err(syntax(line_no, &format!("vertex {v} outside 0..{n}")));
        }
        out.push(UpdateEvent { kind, u, v });
    }
    Ok((n, out))
}
