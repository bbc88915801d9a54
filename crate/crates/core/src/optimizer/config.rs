//! Optimizer configuration: every option axis of the conflict optimizer,
//! plus the presets matching the three team variants.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("weight exponent p = {0} outside [1, 2] (set allow_wide_exponent to override)")]
    ExponentOutOfRange(f64),
    #[error("sigma must be non-negative, got {0}")]
    NegativeSigma(f64),
    #[error("phase length must be positive")]
    ZeroPhaseLength,
    #[error("shuffle fraction must be in [0, 1], got {0}")]
    BadShuffleFraction(f64),
}

/// Which color class to eliminate when an attempt starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VictimColorStrategy {
    SmallestClass,
    Random,
}

/// How the next vertex is taken from the conflict set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionStrategy {
    FifoQueue,
    Random,
    /// The vertex whose cheapest class (noise-free score) is minimal.
    LeastConflictAfterRemoval,
}

/// What happens when q(u) passes the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdMode {
    /// w(u) becomes infinite so u never reenters the conflict set.
    InfiniteWeight,
    /// The attempt is aborted and retried from a fresh start.
    AbortRestart,
}

/// When q(u) ticks: on entering the conflict set (uncoloring) or on leaving
/// it. The two coincide over a completed run except for the final state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QIncrement {
    OnEnter,
    OnLeave,
}

/// Search space: partial colorings (uncolor conflicting vertices) or full
/// assignments with conflicts allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighborhood {
    Partial,
    Tabucol,
}

/// Threshold source for q_max.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QMaxSetting {
    Unlimited,
    /// `2000 * (75000 / vertex_count)^2`, the formula used at challenge scale.
    FromVertexCount,
    Fixed(u64),
}

/// Elapsed-time source for trace rows. `Logical` derives timestamps from the
/// iteration counter so fixed-seed runs produce bit-identical traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClockMode {
    Wall,
    Logical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BdfsConfig {
    pub enabled: bool,
    /// Adjacency bound: classes with more neighbors than this are not tried.
    pub adjacency_bound: usize,
    pub depth: u32,
    /// (conflict set size, depth) pairs; the deepest matching entry wins.
    pub depth_escalation: Vec<(usize, u32)>,
}

impl BdfsConfig {
    pub fn off() -> Self {
        BdfsConfig {
            enabled: false,
            adjacency_bound: 3,
            depth: 3,
            depth_escalation: vec![(2, 5), (1, 7)],
        }
    }

    pub fn standard() -> Self {
        BdfsConfig {
            enabled: true,
            ..Self::off()
        }
    }

    /// Effective depth given the current conflict-set size.
    pub fn depth_for(&self, conflict_set_len: usize) -> u32 {
        self.depth_escalation
            .iter()
            .filter(|&&(size, _)| conflict_set_len <= size)
            .map(|&(_, d)| d)
            .max()
            .unwrap_or(self.depth)
            .max(self.depth)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseConfig {
    pub enabled: bool,
    /// Iterations per phase before switching between weighted scoring and
    /// pure conflict counting.
    pub length: u64,
}

impl PhaseConfig {
    pub fn off() -> Self {
        PhaseConfig {
            enabled: false,
            length: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestartConfig {
    /// Conflict-set size that triggers a restart; `None` means
    /// `max(50, vertex_count / 20)`.
    pub conflict_set_limit: Option<usize>,
    /// Fraction of vertices moved to different classes when reshuffling.
    pub shuffle_fraction: f64,
}

impl Default for RestartConfig {
    fn default() -> Self {
        RestartConfig {
            conflict_set_limit: None,
            shuffle_fraction: 0.1,
        }
    }
}

impl RestartConfig {
    pub fn resolved_limit(&self, vertex_count: usize) -> usize {
        self.conflict_set_limit
            .unwrap_or_else(|| (vertex_count / 20).max(50))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub neighborhood: Neighborhood,
    pub victim_color_strategy: VictimColorStrategy,
    pub selection_strategy: SelectionStrategy,
    /// Weight exponent: w(u) = 1 + q(u)^p.
    pub exponent_p: f64,
    pub allow_wide_exponent: bool,
    pub q_max: QMaxSetting,
    pub threshold_mode: ThresholdMode,
    pub q_increment: QIncrement,
    /// Standard deviation of the Gaussian class-score factor; 0 disables it.
    pub sigma: f64,
    pub bdfs: BdfsConfig,
    pub phase: PhaseConfig,
    pub restart: RestartConfig,
    pub multistart: bool,
    pub clique_pinning: bool,
    /// Clique vertex ids to pin; when pinning is on and this is empty the
    /// heuristic clique search supplies one.
    pub pinned_clique: Option<Vec<u32>>,
    pub use_degeneracy: bool,
    pub seed: u64,
    pub clock: ClockMode,
    /// Run incremental invariant checks every iteration (tests only).
    pub paranoid: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            neighborhood: Neighborhood::Partial,
            victim_color_strategy: VictimColorStrategy::SmallestClass,
            selection_strategy: SelectionStrategy::FifoQueue,
            exponent_p: 1.2,
            allow_wide_exponent: false,
            q_max: QMaxSetting::FromVertexCount,
            threshold_mode: ThresholdMode::InfiniteWeight,
            q_increment: QIncrement::OnEnter,
            sigma: 0.15,
            bdfs: BdfsConfig::off(),
            phase: PhaseConfig::off(),
            restart: RestartConfig::default(),
            multistart: false,
            clique_pinning: false,
            pinned_clique: None,
            use_degeneracy: true,
            seed: 0,
            clock: ClockMode::Wall,
            paranoid: false,
        }
    }
}

impl OptimizerConfig {
    /// Shadoks variant: smallest victim class, fifo queue, p = 1.2 with the
    /// vertex-count threshold, sigma = 0.15, BDFS, degeneracy reduction, and
    /// clique pinning.
    pub fn shadoks(seed: u64) -> Self {
        OptimizerConfig {
            bdfs: BdfsConfig::standard(),
            clique_pinning: true,
            seed,
            ..Default::default()
        }
    }

    /// Gitastrophe variant: random victim and selection, w = 1 + q^2, the
    /// threshold aborts instead of freezing, no noise, phase alternation.
    pub fn gitastrophe(seed: u64) -> Self {
        OptimizerConfig {
            victim_color_strategy: VictimColorStrategy::Random,
            selection_strategy: SelectionStrategy::Random,
            exponent_p: 2.0,
            threshold_mode: ThresholdMode::AbortRestart,
            sigma: 0.0,
            phase: PhaseConfig {
                enabled: true,
                length: 100_000,
            },
            seed,
            ..Default::default()
        }
    }

    /// Lasa PWLS variant: partial colorings, least-conflict selection,
    /// w = 1 + q, no threshold, no noise.
    pub fn lasa_pwls(seed: u64) -> Self {
        OptimizerConfig {
            selection_strategy: SelectionStrategy::LeastConflictAfterRemoval,
            exponent_p: 1.0,
            q_max: QMaxSetting::Unlimited,
            sigma: 0.0,
            seed,
            ..Default::default()
        }
    }

    /// Lasa CWLS variant: complete assignments with conflicts, otherwise as
    /// PWLS.
    pub fn lasa_cwls(seed: u64) -> Self {
        OptimizerConfig {
            neighborhood: Neighborhood::Tabucol,
            ..Self::lasa_pwls(seed)
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !self.allow_wide_exponent && !(1.0..=2.0).contains(&self.exponent_p) {
            return Err(ConfigError::ExponentOutOfRange(self.exponent_p));
        }
        if self.sigma < 0.0 {
            return Err(ConfigError::NegativeSigma(self.sigma));
        }
        if self.phase.enabled && self.phase.length == 0 {
            return Err(ConfigError::ZeroPhaseLength);
        }
        if !(0.0..=1.0).contains(&self.restart.shuffle_fraction) {
            return Err(ConfigError::BadShuffleFraction(
                self.restart.shuffle_fraction,
            ));
        }
        Ok(())
    }

    pub fn resolved_q_max(&self, vertex_count: usize) -> Option<u64> {
        match self.q_max {
            QMaxSetting::Unlimited => None,
            QMaxSetting::FromVertexCount => Some(default_q_max(vertex_count)),
            QMaxSetting::Fixed(v) => Some(v),
        }
    }
}

/// The challenge-scale threshold formula: 2000 * (75000 / m)^2 for a graph
/// with m vertices, rounded to the nearest integer.
pub fn default_q_max(vertex_count: usize) -> u64 {
    assert!(vertex_count > 0, "vertex count must be positive");
    let ratio = 75_000.0 / vertex_count as f64;
    (2000.0 * ratio * ratio).round() as u64
}

/// w(q) = 1 + q^p, or infinite past the threshold (infinite-weight mode
/// passes its resolved threshold here; abort mode passes `None`).
pub fn weight(q: u64, exponent_p: f64, q_max: Option<u64>) -> f64 {
    if let Some(limit) = q_max {
        if q > limit {
            return f64::INFINITY;
        }
    }
    1.0 + (q as f64).powf(exponent_p)
}
