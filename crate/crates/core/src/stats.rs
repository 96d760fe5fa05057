//! Process-wide counters for runtime invariant checks.
//!
//! Checks that run deep inside the pipeline report here so that test suites
//! can confirm both that a check ran and that it never failed.

use std::sync::atomic::{AtomicU64, Ordering::Relaxed};

static LEVEL_CHECKS: AtomicU64 = AtomicU64::new(0);
static LEVEL_FAILURES: AtomicU64 = AtomicU64::new(0);
static SWEEP_RUNS: AtomicU64 = AtomicU64::new(0);
static SWEEP_OVERRUNS: AtomicU64 = AtomicU64::new(0);

/// A copy of every counter.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    /// Calls of the level computation whose results were checked.
    pub level_checks: u64,
    /// Checked calls where one of the level properties failed.
    pub level_failures: u64,
    /// Label-sweep evaluations.
    pub sweep_runs: u64,
    /// Evaluations needing more sweeps than labels plus one.
    pub sweep_overruns: u64,
}

impl Counters {
    /// Counts accumulated since `earlier`.
    pub fn since(self, earlier: Counters) -> Counters {
        Counters {
            level_checks: self.level_checks - earlier.level_checks,
            level_failures: self.level_failures - earlier.level_failures,
            sweep_runs: self.sweep_runs - earlier.sweep_runs,
            sweep_overruns: self.sweep_overruns - earlier.sweep_overruns,
        }
    }
}

pub fn snapshot() -> Counters {
    Counters {
        level_checks: LEVEL_CHECKS.load(Relaxed),
        level_failures: LEVEL_FAILURES.load(Relaxed),
        sweep_runs: SWEEP_RUNS.load(Relaxed),
        sweep_overruns: SWEEP_OVERRUNS.load(Relaxed),
    }
}

pub(crate) fn record_level_check(ok: bool) {
    LEVEL_CHECKS.fetch_add(1, Relaxed);
    if !ok {
        LEVEL_FAILURES.fetch_add(1, Relaxed);
    }
}

pub(crate) fn record_sweeps(sweeps: usize, labels: usize) {
    SWEEP_RUNS.fetch_add(1, Relaxed);
    if sweeps > labels + 1 {
        SWEEP_OVERRUNS.fetch_add(1, Relaxed);
    }
}
