//! Machine-independent work accounting and phase statistics.

use std::fmt;

/// Why a phase (or epoch) ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PhaseCause {
    /// An update landed inside the frozen sample.
    SampleHit,
    /// Too many moves out of `I` (or sample-incident updates).
    MoveBudget,
    /// The maximum degree of the low-vertex graph exceeded its cap.
    DegreeCap,
    /// The phase ran its full length.
    Expired,
    /// An enclosing phase ended.
    Parent,
    /// The edge count left the epoch window.
    Epoch,
}

impl PhaseCause {
    pub const ALL: [PhaseCause; 6] = [
        PhaseCause::SampleHit,
        PhaseCause::MoveBudget,
        PhaseCause::DegreeCap,
        PhaseCause::Expired,
        PhaseCause::Parent,
        PhaseCause::Epoch,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Short label used in CSV headers and logs.
    pub fn label(self) -> &'static str {
        match self {
            PhaseCause::SampleHit => "th",
            PhaseCause::MoveBudget => "ti",
            PhaseCause::DegreeCap => "tl",
            PhaseCause::Expired => "texp",
            PhaseCause::Parent => "parent",
            PhaseCause::Epoch => "epoch",
        }
    }

    /// Successful phases run their full length or end with their parent.
    pub fn is_success(self) -> bool {
        matches!(
            self,
            PhaseCause::Expired | PhaseCause::Parent | PhaseCause::Epoch
        )
    }
}

impl fmt::Display for PhaseCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One finished phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseRecord {
    /// 1-based level; 1 for the single-level algorithms.
    pub level: usize,
    /// Updates consumed by the phase.
    pub length: u64,
    pub cause: PhaseCause,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WorkMeter {
    pub work_units: u64,
    pub wall_ns: u128,
    pub updates: u64,
    /// Finished phases over all levels; equals the sum of `phases_by_cause`.
    pub phases_total: u64,
    pub phases_by_cause: [u64; 6],
    /// Phases started per level, including running ones (index 0 is level 1).
    pub level_phases: Vec<u64>,
    /// Largest degree observed in the low-vertex graph at phase ends.
    pub max_delta_low: usize,
    pub verify_failures: u64,
    /// Epochs started (single-level m-based algorithm only).
    pub epochs: u64,
    pub records: Vec<PhaseRecord>,
}

impl WorkMeter {
    pub fn new(levels: usize) -> Self {
        Self {
            level_phases: vec![0; levels],
            ..Self::default()
        }
    }

    pub(crate) fn phase_started(&mut self, level: usize) {
        if self.level_phases.len() < level {
            self.level_phases.resize(level, 0);
        }
        self.level_phases[level - 1] += 1;
    }

    pub(crate) fn phase_ended(&mut self, level: usize, length: u64, cause: PhaseCause) {
        self.phases_total += 1;
        self.phases_by_cause[cause.index()] += 1;
        self.records.push(PhaseRecord {
            level,
            length,
            cause,
        });
    }

    pub(crate) fn observe_delta(&mut self, delta: usize) {
        self.max_delta_low = self.max_delta_low.max(delta);
    }

    pub fn count(&self, cause: PhaseCause) -> u64 {
        self.phases_by_cause[cause.index()]
    }

    /// Phases that finished (as opposed to the one still running at the end).
    pub fn completed(&self, level: usize) -> impl Iterator<Item = &PhaseRecord> {
        self.records.iter().filter(move |r| r.level == level)
    }

    /// Fraction of finished phases at `level` that were successful.
    pub fn success_fraction(&self, level: usize) -> Option<f64> {
        let (mut total, mut ok) = (0u64, 0u64);
        for r in self.completed(level) {
            total += 1;
            ok += r.cause.is_success() as u64;
        }
        (total > 0).then(|| ok as f64 / total as f64)
    }

    /// Work units per processed update.
    pub fn work_per_update(&self) -> f64 {
        self.work_units as f64 / self.updates.max(1) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totals_match_cause_counts() {
        let mut m = WorkMeter::new(2);
        m.phase_started(1);
        m.phase_started(2);
        m.phase_ended(2, 3, PhaseCause::Expired);
        m.phase_started(2);
        m.phase_ended(1, 5, PhaseCause::SampleHit);
        m.phase_ended(2, 2, PhaseCause::Parent);
        m.phase_started(1);
        m.phase_started(2);
        assert_eq!(m.phases_total, 3);
        assert_eq!(m.phases_total, m.phases_by_cause.iter().sum::<u64>());
        assert_eq!(m.level_phases, vec![2, 3]);
        assert_eq!(m.count(PhaseCause::SampleHit), 1);
        assert_eq!(m.success_fraction(2), Some(1.0));
        assert_eq!(m.success_fraction(1), Some(0.0));
    }
}
