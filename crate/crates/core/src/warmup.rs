//! The n^{2/3} algorithm: one frozen sample per phase, with the
//! deterministic engine on the left-over graph `G[L]`.

use rand::Rng;

use crate::graph::{DynamicGraph, GraphError, Neighbors, UpdateEvent};
use crate::meter::{PhaseCause, WorkMeter};
use crate::oracle::{greedy_mis, MisSet};
use crate::phase::{PhaseMode, PhaseParams, PhaseState, Step};
use crate::rng::{self, TrialRng};
use crate::DynamicMis;

/// Result of one round of sample-and-prune.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub sampled: Vec<bool>,
    /// Greedy MIS of `G[sampled]`.
    pub mis: MisSet,
}

impl Sample {
    /// Vertices neither in the MIS nor adjacent to it.
    pub fn residual(&self, g: &DynamicGraph) -> Vec<bool> {
        (0..g.vertex_count())
            .map(|v| !self.mis.contains(v) && !g.neighbors(v).iter().any(|&w| self.mis.contains(w)))
            .collect()
    }
}

/// Samples every vertex independently with probability `p` and takes the
/// greedy MIS of the sample.
pub fn preprocess(g: &DynamicGraph, p: f64, rng: &mut TrialRng) -> Sample {
    let p = p.clamp(0.0, 1.0);
    let sampled: Vec<bool> = (0..g.vertex_count()).map(|_| rng.gen_bool(p)).collect();
    let mis = greedy_mis(g, |v| sampled[v]);
    Sample { sampled, mis }
}

#[derive(Debug, Clone)]
pub struct Warmup {
    graph: DynamicGraph,
    state: PhaseState,
    params: PhaseParams,
    rng: TrialRng,
    meter: WorkMeter,
}

impl Warmup {
    pub fn new(n: usize, seed: u64) -> Result<Self, GraphError> {
        Self::with_params(n, PhaseParams::for_vertices(n), seed)
    }

    pub fn with_params(n: usize, params: PhaseParams, seed: u64) -> Result<Self, GraphError> {
        let graph = DynamicGraph::new(n)?;
        let mut this = Self {
            state: PhaseState::new(n, params, PhaseMode::EAGER),
            graph,
            params,
            rng: rng::stream(seed, rng::ALGORITHM_STREAM),
            meter: WorkMeter::new(1),
        };
        this.start_phase();
        Ok(this)
    }

    pub fn params(&self) -> &PhaseParams {
        &self.params
    }

    pub fn state(&self) -> &PhaseState {
        &self.state
    }

    fn start_phase(&mut self) {
        loop {
            self.meter.phase_started(1);
            if self.state.start(&self.graph, self.params, &mut self.rng) {
                break;
            }
            self.meter.observe_delta(self.state.low_max_degree());
            self.meter.phase_ended(1, 0, PhaseCause::DegreeCap);
        }
    }

    /// Applies `e` and reports whether the running phase survived it.
    pub fn step(&mut self, e: UpdateEvent) -> Result<Step, GraphError> {
        self.graph.apply(e)?;
        self.meter.updates += 1;
        match self.state.process(&self.graph, e, &mut self.rng) {
            None => Ok(Step::Continued),
            Some(cause) => {
                self.meter.observe_delta(self.state.low_max_degree());
                self.meter.phase_ended(1, self.state.age(), cause);
                self.start_phase();
                Ok(Step::PhaseEnded(cause))
            }
        }
    }
}

impl DynamicMis for Warmup {
    fn update(&mut self, e: UpdateEvent) -> Result<(), GraphError> {
        self.step(e).map(|_| ())
    }

    fn graph(&self) -> &DynamicGraph {
        &self.graph
    }

    fn mis(&self) -> MisSet {
        self.state.current_mis()
    }

    fn meter(&self) -> WorkMeter {
        let mut m = self.meter.clone();
        m.work_units = self.state.work();
        m
    }

    fn audit(&self) -> Result<(), String> {
        self.state.audit(&self.graph)
    }
}

/// Runs the n^{2/3} algorithm over `updates` from the empty graph.
pub fn warmup_run(
    n: usize,
    updates: &[UpdateEvent],
    seed: u64,
) -> Result<(MisSet, WorkMeter), GraphError> {
    let mut algo = Warmup::new(n, seed)?;
    for &e in updates {
        algo.update(e)?;
    }
    Ok((algo.mis(), algo.meter()))
}
