use std::cell::Cell;
use std::time::Instant;

use serde::{Deserialize, Serialize};

/// Work units that make up one virtual millisecond.
pub const TICKS_PER_MS: u64 = 400;

/// How a run's time budget is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClockKind {
    /// Real elapsed time.
    Wall,
    /// Counted move evaluations, `TICKS_PER_MS` per millisecond. Runs are
    /// then reproducible bit for bit.
    Work,
}

/// Budget tracker polled by the search between move evaluations.
#[derive(Debug)]
pub struct Clock {
    kind: ClockKind,
    limit_ms: Option<u64>,
    start: Instant,
    ticks: Cell<u64>,
}

impl Clock {
    pub fn new(kind: ClockKind, limit_ms: u64) -> Self {
        Clock {
            kind,
            limit_ms: Some(limit_ms),
            start: Instant::now(),
            ticks: Cell::new(0),
        }
    }

    pub fn unbounded() -> Self {
        Clock {
            kind: ClockKind::Work,
            limit_ms: None,
            start: Instant::now(),
            ticks: Cell::new(0),
        }
    }

    /// Records one unit of work and reports whether the budget is spent.
    #[inline]
    pub fn tick(&self) -> bool {
        self.ticks.set(self.ticks.get() + 1);
        self.expired()
    }

    /// Records `n` units of work done outside the polled loops.
    pub fn charge(&self, n: u64) {
        self.ticks.set(self.ticks.get() + n);
    }

    /// Budget left, `None` when unbounded.
    pub fn remaining_ms(&self) -> Option<u64> {
        self.limit_ms.map(|l| l.saturating_sub(self.elapsed_ms()))
    }

    #[inline]
    pub fn expired(&self) -> bool {
        match self.limit_ms {
            None => false,
            Some(limit) => self.elapsed_ms() >= limit,
        }
    }

    pub fn elapsed_ms(&self) -> u64 {
        match self.kind {
            ClockKind::Wall => self.start.elapsed().as_millis() as u64,
            ClockKind::Work => self.ticks.get() / TICKS_PER_MS,
        }
    }

    pub fn kind(&self) -> ClockKind {
        self.kind
    }

    pub fn ticks(&self) -> u64 {
        self.ticks.get()
    }

    pub fn limit_ms(&self) -> Option<u64> {
        self.limit_ms
    }
}
