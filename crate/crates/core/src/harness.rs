//! Runs an algorithm over a workload, verifying and metering as it goes,
//! and renders the results as CSV rows and scaling fits.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use thiserror::Error;

use crate::graph::{GraphError, UpdateEvent};
use crate::meter::{PhaseCause, WorkMeter};
use crate::oracle::{verify_mis, MisSet};
use crate::par::{self, Execution};
use crate::workload::{self, WorkloadError, WorkloadSpec};
use crate::{Det, DynamicMis, SqrtN, Warmup, M13};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Workload(#[from] WorkloadError),
    #[error("update {index}: {source}")]
    Graph { index: usize, source: GraphError },
    #[error("cannot set up the algorithm: {0}")]
    Setup(#[from] GraphError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("unknown algorithm `{0}` (expected det, warmup, m13 or sqrtn)")]
    UnknownAlgo(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algo {
    Det,
    WarmupN23,
    M13,
    SqrtN,
}

impl Algo {
    pub const ALL: [Algo; 4] = [Algo::Det, Algo::WarmupN23, Algo::M13, Algo::SqrtN];

    pub fn build(self, n: usize, seed: u64) -> Result<Box<dyn DynamicMis + Send>, GraphError> {
        Ok(match self {
            Algo::Det => Box::new(Det::new(n)?),
            Algo::WarmupN23 => Box::new(Warmup::new(n, seed)?),
            Algo::M13 => Box::new(M13::new(n, seed)?),
            Algo::SqrtN => Box::new(SqrtN::new(n, seed)?),
        })
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algo::Det => "det",
            Algo::WarmupN23 => "warmup",
            Algo::M13 => "m13",
            Algo::SqrtN => "sqrtn",
        })
    }
}

impl FromStr for Algo {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "det" => Ok(Algo::Det),
            "warmup" | "warmupn23" | "n23" => Ok(Algo::WarmupN23),
            "m13" => Ok(Algo::M13),
            "sqrtn" => Ok(Algo::SqrtN),
            _ => Err(HarnessError::UnknownAlgo(s.to_string())),
        }
    }
}

/// Where the update sequence comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum Workload {
    Generated(WorkloadSpec),
    /// A replayed file; `label` fills the family column.
    Recorded {
        label: String,
        n: usize,
        updates: Vec<UpdateEvent>,
    },
}

impl Workload {
    pub fn n(&self) -> usize {
        match self {
            Workload::Generated(spec) => spec.n,
            Workload::Recorded { n, .. } => *n,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Workload::Generated(spec) => spec.family.to_string(),
            Workload::Recorded { label, .. } => label.clone(),
        }
    }

    pub fn updates(&self) -> Result<Vec<UpdateEvent>, WorkloadError> {
        match self {
            Workload::Generated(spec) => workload::generate(spec),
            Workload::Recorded { updates, .. } => Ok(updates.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub algo: Algo,
    pub workload: Workload,
    /// Verify after every `verify_every`-th update; 0 disables.
    pub verify_every: usize,
    /// Also run the algorithm's internal audit at each verification point.
    pub audit: bool,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(algo: Algo, spec: WorkloadSpec) -> Self {
        Self {
            algo,
            seed: spec.seed,
            workload: Workload::Generated(spec),
            verify_every: 0,
            audit: false,
        }
    }

    pub fn verify_every(mut self, every: usize) -> Self {
        self.verify_every = every;
        self
    }

    pub fn audited(mut self) -> Self {
        self.audit = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub row: CsvRow,
    pub meter: WorkMeter,
    pub mis: MisSet,
    /// Internal audits that failed; always 0 unless auditing was requested.
    pub audit_failures: u64,
    /// Time spent in the oracle and in audits; not part of `wall_ns`.
    pub verify_ns: u128,
    pub audit_ns: u128,
    /// First few failure descriptions, for diagnostics.
    pub failures: Vec<String>,
}

impl RunOutcome {
    pub fn is_clean(&self) -> bool {
        self.row.verify_failures == 0 && self.audit_failures == 0
    }
}

const KEPT_FAILURES: usize = 8;

pub fn run(config: &RunConfig) -> Result<RunOutcome, HarnessError> {
    let updates = config.workload.updates()?;
    let n = config.workload.n();
    let mut algo = config.algo.build(n, config.seed)?;
    let mut failures = Vec::new();
    let (mut verify_failures, mut audit_failures) = (0u64, 0u64);
    let (mut wall_ns, mut verify_ns, mut audit_ns) = (0u128, 0u128, 0u128);
    let mut check = |algo: &dyn DynamicMis, index: usize, failures: &mut Vec<String>| {
        let start = Instant::now();
        let verdict = verify_mis(algo.graph(), &algo.mis(), |_| true);
        verify_ns += start.elapsed().as_nanos();
        if !verdict.is_valid() {
            verify_failures += 1;
            if failures.len() < KEPT_FAILURES {
                failures.push(format!("after update {index}: {verdict:?}"));
            }
        }
        if config.audit {
            let start = Instant::now();
            let audit = algo.audit();
            audit_ns += start.elapsed().as_nanos();
            if let Err(msg) = audit {
                audit_failures += 1;
                if failures.len() < KEPT_FAILURES {
                    failures.push(format!("after update {index}: audit: {msg}"));
                }
            }
        }
    };
    for (index, &e) in updates.iter().enumerate() {
        let start = Instant::now();
        algo.update(e).map_err(|source| HarnessError::Graph { index, source })?;
        wall_ns += start.elapsed().as_nanos();
        if config.verify_every > 0 && (index + 1) % config.verify_every == 0 {
            check(algo.as_ref(), index, &mut failures);
        }
    }
    if config.verify_every > 0 && updates.is_empty() {
        check(algo.as_ref(), 0, &mut failures);
    }
    let mut meter = algo.meter();
    meter.wall_ns = wall_ns;
    meter.verify_failures = verify_failures;
    let row = CsvRow::new(config, &config.workload.label(), n, updates.len(), &meter);
    Ok(RunOutcome {
        row,
        meter,
        mis: algo.mis(),
        audit_failures,
        verify_ns,
        audit_ns,
        failures,
    })
}

/// One line of the results table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvRow {
    pub algo: String,
    pub family: String,
    pub n: usize,
    pub k_updates: usize,
    pub seed: u64,
    pub work_units: u64,
    pub wall_ns: u128,
    pub phases_total: u64,
    /// Indexed by [`PhaseCause::index`].
    pub phases_by_cause: [u64; 6],
    pub max_delta_low: usize,
    pub verify_failures: u64,
}

impl CsvRow {
    pub const HEADER: [&'static str; 16] = [
        "algo",
        "family",
        "n",
        "k_updates",
        "seed",
        "work_units",
        "wall_ns",
        "phases_total",
        "ph_th",
        "ph_ti",
        "ph_tl",
        "ph_texp",
        "ph_parent",
        "ph_epoch",
        "max_deltaL",
        "verify_failures",
    ];

    fn new(config: &RunConfig, family: &str, n: usize, k: usize, meter: &WorkMeter) -> Self {
        Self {
            algo: config.algo.to_string(),
            family: family.to_string(),
            n,
            k_updates: k,
            seed: config.seed,
            work_units: meter.work_units,
            wall_ns: meter.wall_ns,
            phases_total: meter.phases_total,
            phases_by_cause: meter.phases_by_cause,
            max_delta_low: meter.max_delta_low,
            verify_failures: meter.verify_failures,
        }
    }

    pub fn record(&self) -> Vec<String> {
        let c = |cause: PhaseCause| self.phases_by_cause[cause.index()].to_string();
        vec![
            self.algo.clone(),
            self.family.clone(),
            self.n.to_string(),
            self.k_updates.to_string(),
            self.seed.to_string(),
            self.work_units.to_string(),
            self.wall_ns.to_string(),
            self.phases_total.to_string(),
            c(PhaseCause::SampleHit),
            c(PhaseCause::MoveBudget),
            c(PhaseCause::DegreeCap),
            c(PhaseCause::Expired),
            c(PhaseCause::Parent),
            c(PhaseCause::Epoch),
            self.max_delta_low.to_string(),
            self.verify_failures.to_string(),
        ]
    }

    pub fn work_per_update(&self) -> f64 {
        self.work_units as f64 / self.k_updates.max(1) as f64
    }
}

pub fn write_csv<'a>(
    rows: impl IntoIterator<Item = &'a CsvRow>,
    sink: impl Write,
) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(CsvRow::HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Runs every config, concurrently when `exec` allows. Errors stay per row.
pub fn bench_matrix(
    configs: &[RunConfig],
    exec: Execution,
) -> Vec<Result<RunOutcome, HarnessError>> {
    par::map(exec, configs, run)
}

/// Least-squares slope of `log2 y` against `log2 x`. Needs two distinct xs.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.log2(), y.log2()))
        .collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (logs.len() >= 2 && sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub algo: String,
    pub family: String,
    /// `(n, mean work per update)` per size, ascending.
    pub means: Vec<(usize, f64)>,
    pub slope: Option<f64>,
}

/// Groups rows by algorithm and family name, averages work per update over
/// seeds at each `n`, and fits the log-log slope of the means.
pub fn fit_slopes(rows: &[CsvRow]) -> Vec<SlopeFit> {
    use std::collections::BTreeMap;
    let family_name = |f: &str| f.split(':').next().unwrap_or(f).to_string();
    let mut groups: BTreeMap<(String, String), BTreeMap<usize, Vec<f64>>> = BTreeMap::new();
    for row in rows {
        groups
            .entry((row.algo.clone(), family_name(&row.family)))
            .or_default()
            .entry(row.n)
            .or_default()
            .push(row.work_per_update());
    }
    groups
        .into_iter()
        .map(|((algo, family), by_n)| {
            let means: Vec<(usize, f64)> = by_n
                .into_iter()
                .map(|(n, xs)| (n, xs.iter().sum::<f64>() / xs.len() as f64))
                .collect();
            let points: Vec<(f64, f64)> = means.iter().map(|&(n, y)| (n as f64, y)).collect();
            SlopeFit {
                algo,
                family,
                slope: loglog_slope(&points),
                means,
            }
        })
        .collect()
}
