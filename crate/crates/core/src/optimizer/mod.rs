//! The conflict-optimization engine: eliminate a color class, then
//! repeatedly pull vertices out of the conflict set and place them where the
//! weighted conflict score is lowest, uncoloring whatever stands in the way.

mod config;
mod driver;
mod engine;
mod state;
mod tabu;
mod trace;

pub use config::{
    default_q_max, weight, BdfsConfig, ClockMode, ConfigError, Neighborhood, OptimizerConfig,
    PhaseConfig, QIncrement, QMaxSetting, RestartConfig, SelectionStrategy, ThresholdMode,
    VictimColorStrategy,
};
pub use driver::{
    optimize, optimize_multistart, optimize_with_observer, shuffle_assignment, OptimizeError,
};
pub use engine::{EliminationOutcome, Engine, EngineError, RestartReason};
pub use state::{PartialState, UNCOLORED};
pub use tabu::TabuRun;
pub use trace::{trace_to_csv, Budget, RunClock, TraceEvent, TraceRow, TRACE_CSV_HEADER};
