//! Run traces and budgets.

use super::config::ClockMode;
use std::fmt;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceEvent {
    Improved,
    Restart,
    Multistart,
    Abort,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TraceEvent::Improved => "improved",
            TraceEvent::Restart => "restart",
            TraceEvent::Multistart => "multistart",
            TraceEvent::Abort => "abort",
        };
        f.write_str(s)
    }
}

/// One time-stamped event: the current best color count when it happened.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub elapsed_seconds: f64,
    pub iteration: u64,
    pub colors: usize,
    pub event: TraceEvent,
}

impl TraceRow {
    /// CSV row matching the `elapsed_seconds,iteration,colors,event` layout.
    pub fn to_csv(&self) -> String {
        format!(
            "{:.6},{},{},{}",
            self.elapsed_seconds, self.iteration, self.colors, self.event
        )
    }
}

pub const TRACE_CSV_HEADER: &str = "elapsed_seconds,iteration,colors,event";

pub fn trace_to_csv(rows: &[TraceRow]) -> String {
    let mut out = String::from(TRACE_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    out
}

/// Wall-clock and/or iteration limits; both unset means run forever.
#[derive(Debug, Clone, Copy, Default)]
pub struct Budget {
    pub time: Option<Duration>,
    pub iterations: Option<u64>,
}

impl Budget {
    pub fn time(seconds: f64) -> Self {
        Budget {
            time: Some(Duration::from_secs_f64(seconds)),
            iterations: None,
        }
    }

    pub fn iterations(n: u64) -> Self {
        Budget {
            time: None,
            iterations: Some(n),
        }
    }

    pub fn exhausted(&self, start: Instant, iterations: u64) -> bool {
        if let Some(limit) = self.iterations {
            if iterations >= limit {
                return true;
            }
        }
        if let Some(limit) = self.time {
            if start.elapsed() >= limit {
                return true;
            }
        }
        false
    }
}

/// Timestamp source for trace rows. Budget enforcement always uses the wall
/// clock; `Logical` only changes what gets reported, making fixed-seed runs
/// reproducible byte for byte.
#[derive(Debug, Clone, Copy)]
pub struct RunClock {
    start: Instant,
    mode: ClockMode,
}

impl RunClock {
    pub fn start(mode: ClockMode) -> Self {
        RunClock {
            start: Instant::now(),
            mode,
        }
    }

    pub fn started_at(&self) -> Instant {
        self.start
    }

    pub fn elapsed_seconds(&self, iterations: u64) -> f64 {
        match self.mode {
            ClockMode::Wall => self.start.elapsed().as_secs_f64(),
            ClockMode::Logical => iterations as f64 * 1e-6,
        }
    }
}
