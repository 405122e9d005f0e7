//! The m^{1/3} algorithm.
//!
//! Phases as in the n^{2/3} algorithm with `p = m^{-1/3}`, wrapped in epochs
//! that restart whenever the edge count leaves `(m/2, 2m)` of its anchor.
//! Sampling is lazy so a phase starts in O(m), and vertices of phase-start
//! degree at least `m^{2/3}` keep explicit lists of their `L`-neighbors.

use crate::graph::{DynamicGraph, GraphError, UpdateEvent};
use crate::meter::{PhaseCause, WorkMeter};
use crate::oracle::MisSet;
use crate::phase::{PhaseMode, PhaseParams, PhaseState, Step};
use crate::rng::{self, TrialRng};
use crate::DynamicMis;

/// Anchor and thresholds of one epoch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Epoch {
    pub m_est: usize,
    pub params: PhaseParams,
}

impl Epoch {
    pub fn new(edge_count: usize) -> Self {
        let m_est = edge_count.max(1);
        Self {
            m_est,
            params: PhaseParams::for_edges(m_est),
        }
    }

    /// The epoch is live while `m_est/2 < m < 2 m_est`.
    pub fn contains(&self, m: usize) -> bool {
        2 * m > self.m_est && m < 2 * self.m_est
    }

    pub fn high_threshold(&self) -> f64 {
        (self.m_est as f64).powf(2.0 / 3.0)
    }

    fn mode(&self) -> PhaseMode {
        let threshold = self.high_threshold();
        PhaseMode {
            lazy: true,
            high_threshold: Some(threshold),
            // a low vertex gains at most one edge per update of the phase
            low_degree_bound: Some(threshold + self.params.phase_len as f64),
        }
    }

    /// Largest number of high vertices a phase start can produce.
    pub fn high_limit(&self) -> f64 {
        4.0 * (self.m_est as f64).cbrt()
    }
}

#[derive(Debug, Clone)]
pub struct M13 {
    graph: DynamicGraph,
    epoch: Epoch,
    state: PhaseState,
    rng: TrialRng,
    meter: WorkMeter,
}

impl M13 {
    pub fn new(n: usize, seed: u64) -> Result<Self, GraphError> {
        let graph = DynamicGraph::new(n)?;
        let epoch = Epoch::new(0);
        let mut this = Self {
            state: PhaseState::new(n, epoch.params, epoch.mode()),
            graph,
            epoch,
            rng: rng::stream(seed, rng::ALGORITHM_STREAM),
            meter: WorkMeter::new(1),
        };
        this.start_epoch();
        Ok(this)
    }

    pub fn epoch(&self) -> &Epoch {
        &self.epoch
    }

    pub fn state(&self) -> &PhaseState {
        &self.state
    }

    fn start_epoch(&mut self) {
        self.epoch = Epoch::new(self.graph.edge_count());
        self.state.set_mode(self.epoch.mode());
        self.meter.epochs += 1;
        self.start_phase();
    }

    fn start_phase(&mut self) {
        loop {
            self.meter.phase_started(1);
            if self.state.start(&self.graph, self.epoch.params, &mut self.rng) {
                break;
            }
            self.meter.observe_delta(self.state.low_max_degree());
            self.meter.phase_ended(1, 0, PhaseCause::DegreeCap);
        }
    }

    pub fn step(&mut self, e: UpdateEvent) -> Result<Step, GraphError> {
        self.graph.apply(e)?;
        self.meter.updates += 1;
        if !self.epoch.contains(self.graph.edge_count()) {
            self.meter.observe_delta(self.state.low_max_degree());
            self.meter.phase_ended(1, self.state.age() + 1, PhaseCause::Epoch);
            self.start_epoch();
            return Ok(Step::EpochEnded);
        }
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

impl DynamicMis for M13 {
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
        let m = self.graph.edge_count();
        if !self.epoch.contains(m) && m > 0 {
            return Err(format!("edge count {m} outside the epoch of anchor {}", self.epoch.m_est));
        }
        if self.state.high_vertices().len() as f64 > self.epoch.high_limit() {
            return Err(format!(
                "{} high vertices above {}",
                self.state.high_vertices().len(),
                self.epoch.high_limit()
            ));
        }
        self.state.audit(&self.graph)
    }
}

pub fn m13_run(
    n: usize,
    updates: &[UpdateEvent],
    seed: u64,
) -> Result<(MisSet, WorkMeter), GraphError> {
    let mut algo = M13::new(n, seed)?;
    for &e in updates {
        algo.update(e)?;
    }
    Ok((algo.mis(), algo.meter()))
}
