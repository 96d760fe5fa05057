//! Word-granular accounting of the algorithmic working set.
//!
//! A word is one machine-integer cell. Structures register their size when
//! they are created and deregister it when released; the ledger keeps the
//! current total, the global peak and a peak per phase. The read-only input
//! grid and the final answer are never charged.

use std::cell::{Cell, RefCell};
use std::collections::BTreeMap;

/// Pipeline phases used as ledger keys.
pub mod phase {
    pub const CIRCLE: &str = "circle";
    pub const TRANSFORM: &str = "transform";
    pub const CACHE: &str = "block_cache";
    pub const STITCHED: &str = "stitched";
    pub const FRONTIER: &str = "frontier";
    pub const BASE_CASE: &str = "base_case";
    pub const SEPARATOR: &str = "separator_stack";
    pub const INDEX: &str = "index";
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
struct PhaseWords {
    current: i64,
    peak: i64,
}

/// Live and peak word counts. Interior mutability lets every component of a
/// solve share one ledger through `&Ledger`.
#[derive(Debug, Default)]
pub struct Ledger {
    enabled: bool,
    current: Cell<i64>,
    peak: Cell<i64>,
    phases: RefCell<BTreeMap<&'static str, PhaseWords>>,
    violation: RefCell<Option<String>>,
}

/// Immutable copy of a ledger's counters.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LedgerSnapshot {
    pub current_words: i64,
    pub peak_words: i64,
    pub phase_peaks: BTreeMap<String, i64>,
}

impl Ledger {
    pub fn new() -> Self {
        Ledger {
            enabled: true,
            ..Default::default()
        }
    }

    /// A ledger that ignores every call.
    pub fn disabled() -> Self {
        Ledger::default()
    }

    pub fn is_enabled(&self) -> bool {
        self.enabled
    }

    /// Adds `delta` words to the live total attributed to `phase`.
    pub fn track(&self, phase: &'static str, delta: i64) {
        if !self.enabled || delta == 0 {
            return;
        }
        let next = self.current.get() + delta;
        if next < 0 {
            self.flag(format!(
                "ledger underflow in phase {phase}: {} + {delta}",
                self.current.get()
            ));
            self.current.set(0);
        } else {
            self.current.set(next);
        }
        self.peak.set(self.peak.get().max(self.current.get()));
        let mut phases = self.phases.borrow_mut();
        let p = phases.entry(phase).or_default();
        p.current += delta;
        if p.current < 0 {
            drop(phases);
            self.flag(format!("phase {phase} went negative"));
            return;
        }
        p.peak = p.peak.max(p.current);
    }

    pub fn current(&self) -> i64 {
        self.current.get()
    }

    pub fn peak(&self) -> i64 {
        self.peak.get()
    }

    pub fn phase_peak(&self, phase: &str) -> i64 {
        self.phases.borrow().get(phase).map_or(0, |p| p.peak)
    }

    /// First accounting error seen, if any.
    pub fn violation(&self) -> Option<String> {
        self.violation.borrow().clone()
    }

    /// Records a leak if anything is still charged.
    pub fn check_released(&self) {
        if self.enabled && self.current.get() != 0 {
            let live: Vec<String> = self
                .phases
                .borrow()
                .iter()
                .filter(|(_, p)| p.current != 0)
                .map(|(k, p)| format!("{k}={}", p.current))
                .collect();
            self.flag(format!(
                "leak: {} words still tracked ({})",
                self.current.get(),
                live.join(", ")
            ));
        }
    }

    pub fn snapshot(&self) -> LedgerSnapshot {
        LedgerSnapshot {
            current_words: self.current.get(),
            peak_words: self.peak.get(),
            phase_peaks: self
                .phases
                .borrow()
                .iter()
                .map(|(k, p)| (k.to_string(), p.peak))
                .collect(),
        }
    }

    fn flag(&self, msg: String) {
        let mut v = self.violation.borrow_mut();
        if v.is_none() {
            *v = Some(msg);
        }
    }
}

/// Word size of a bitset over `bits` entries.
pub fn bitset_words(bits: usize) -> i64 {
    bits.div_ceil(64) as i64
}

/// Charges `words` for as long as the guard lives.
pub struct Charge<'a> {
    ledger: &'a Ledger,
    phase: &'static str,
    words: i64,
}

impl<'a> Charge<'a> {
    pub fn new(ledger: &'a Ledger, phase: &'static str, words: i64) -> Self {
        ledger.track(phase, words);
        Charge {
            ledger,
            phase,
            words,
        }
    }

    /// Changes the charged amount to `words`.
    pub fn resize(&mut self, words: i64) {
        self.ledger.track(self.phase, words - self.words);
        self.words = words;
    }

    pub fn words(&self) -> i64 {
        self.words
    }
}

impl Drop for Charge<'_> {
    fn drop(&mut self) {
        self.ledger.track(self.phase, -self.words);
    }
}
