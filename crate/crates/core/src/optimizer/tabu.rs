//! TABUCOL-inspired neighborhood: complete k-assignments with conflicts
//! allowed. The tabu list is replaced by the conflict-optimizer weights; a
//! move recolors one conflicting vertex to the class of lowest weighted
//! conflict sum, and the run ends when no conflicts remain.

use super::config::{weight, OptimizerConfig, ThresholdMode, VictimColorStrategy};
use super::engine::{choose_victim, EliminationOutcome, EngineError, RestartReason};
use super::state::PartialState;
use super::trace::{Budget, RunClock};
use crate::graph::{Coloring, Graph};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub struct TabuRun<'g> {
    g: &'g Graph,
    cfg: OptimizerConfig,
    q_max: Option<u64>,
    restart_limit: usize,
    rng: ChaCha8Rng,
    noise: Option<Normal<f64>>,
    iterations: u64,
    threshold_tripped: bool,
    class_of: Vec<u32>,
    num_classes: usize,
    q: Vec<u64>,
    pinned: Vec<bool>,
    // conflict bookkeeping: per-vertex count of same-class neighbors, and the
    // set of unpinned vertices with at least one conflict
    conf: Vec<u32>,
    conflicted: Vec<u32>,
    pos_in_conflicted: Vec<u32>,
    total_conflicts: u64,
}

impl<'g> TabuRun<'g> {
    pub fn resume(
        g: &'g Graph,
        cfg: OptimizerConfig,
        rng: ChaCha8Rng,
        iterations: u64,
    ) -> Result<Self, super::config::ConfigError> {
        cfg.validate()?;
        let n = g.vertex_count();
        let q_max = cfg.resolved_q_max(n.max(1));
        let restart_limit = cfg.restart.resolved_limit(n);
        let noise = (cfg.sigma > 0.0)
            .then(|| Normal::new(1.0, cfg.sigma).expect("sigma is finite and positive"));
        Ok(TabuRun {
            g,
            cfg,
            q_max,
            restart_limit,
            rng,
            noise,
            iterations,
            threshold_tripped: false,
            class_of: Vec::new(),
            num_classes: 0,
            q: vec![0; n],
            pinned: vec![false; n],
            conf: vec![0; n],
            conflicted: Vec::new(),
            pos_in_conflicted: vec![u32::MAX; n],
            total_conflicts: 0,
        })
    }

    pub fn into_parts(self) -> (ChaCha8Rng, u64) {
        (self.rng, self.iterations)
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn total_conflicts(&self) -> u64 {
        self.total_conflicts
    }

    pub fn class_of(&self, v: u32) -> u32 {
        self.class_of[v as usize]
    }

    /// Loads a complete (possibly conflicting) assignment with `num_classes`
    /// classes.
    pub fn load_assignment(&mut self, colors: &[u32], num_classes: usize, pinned: &[u32]) {
        let n = self.g.vertex_count();
        assert_eq!(colors.len(), n);
        self.class_of = colors.to_vec();
        self.num_classes = num_classes;
        self.q = vec![0; n];
        self.pinned = vec![false; n];
        for &v in pinned {
            self.pinned[v as usize] = true;
        }
        self.threshold_tripped = false;
        self.rebuild_conflicts();
    }

    /// Loads a valid coloring and brings it down to `k_target` classes by
    /// eliminating victim classes and scattering their vertices randomly
    /// over the remaining classes.
    pub fn load_with_target(
        &mut self,
        colors: &[u32],
        num_classes: usize,
        pinned: &[u32],
        k_target: usize,
        victim: VictimColorStrategy,
    ) -> Result<(), EngineError> {
        assert!(k_target >= 1);
        let mut ps = PartialState::from_assignment(colors, num_classes, pinned);
        while ps.num_classes() > k_target {
            let victim = choose_victim(&ps, victim, &mut self.rng)?;
            ps.eliminate_class(victim);
        }
        let scattered: Vec<u32> = (0..colors.len() as u32)
            .map(|v| {
                let c = ps.class_of(v);
                if c == super::state::UNCOLORED {
                    self.rng.random_range(0..k_target as u32)
                } else {
                    c
                }
            })
            .collect();
        self.load_assignment(&scattered, k_target, pinned);
        Ok(())
    }

    fn rebuild_conflicts(&mut self) {
        let n = self.g.vertex_count();
        self.conf = vec![0; n];
        self.conflicted.clear();
        self.pos_in_conflicted = vec![u32::MAX; n];
        self.total_conflicts = 0;
        for (u, v) in self.g.edges() {
            if self.class_of[u as usize] == self.class_of[v as usize] {
                self.conf[u as usize] += 1;
                self.conf[v as usize] += 1;
                self.total_conflicts += 1;
            }
        }
        for v in 0..n as u32 {
            if self.conf[v as usize] > 0 && !self.pinned[v as usize] {
                self.list_add(v);
            }
        }
    }

    fn list_add(&mut self, v: u32) {
        debug_assert_eq!(self.pos_in_conflicted[v as usize], u32::MAX);
        self.pos_in_conflicted[v as usize] = self.conflicted.len() as u32;
        self.conflicted.push(v);
    }

    fn list_remove(&mut self, v: u32) {
        let pos = self.pos_in_conflicted[v as usize] as usize;
        debug_assert_ne!(pos, u32::MAX as usize);
        let last = *self.conflicted.last().expect("non-empty");
        self.conflicted.swap_remove(pos);
        if last != v {
            self.pos_in_conflicted[last as usize] = pos as u32;
        }
        self.pos_in_conflicted[v as usize] = u32::MAX;
    }

    fn weight_of(&self, v: u32) -> f64 {
        if self.pinned[v as usize] {
            return f64::INFINITY;
        }
        let threshold = match self.cfg.threshold_mode {
            ThresholdMode::InfiniteWeight => self.q_max,
            ThresholdMode::AbortRestart => None,
        };
        weight(self.q[v as usize], self.cfg.exponent_p, threshold)
    }

    fn weighted_phase(&self) -> bool {
        !self.cfg.phase.enabled || (self.iterations / self.cfg.phase.length) % 2 == 0
    }

    /// One local-search move: pick a conflicting vertex and recolor it to
    /// the class with the lowest conflict score among the other classes.
    /// The new conflict partners get their q bumped.
    pub fn step(&mut self) -> Result<(), RestartReason> {
        debug_assert!(self.total_conflicts > 0);
        let v = self.conflicted[self.rng.random_range(0..self.conflicted.len())];
        let old = self.class_of[v as usize];

        let k = self.num_classes;
        let mut counts = vec![0u32; k];
        let mut wsums = vec![0.0f64; k];
        for &u in self.g.neighbors(v) {
            let c = self.class_of[u as usize] as usize;
            counts[c] += 1;
            wsums[c] += self.weight_of(u);
        }
        let conflict_min = !self.weighted_phase();
        let mut best: Option<(f64, usize)> = None;
        for j in 0..k {
            if j == old as usize || wsums[j].is_infinite() {
                continue;
            }
            let score = if conflict_min {
                counts[j] as f64
            } else if counts[j] == 0 {
                0.0
            } else {
                let f = match self.noise {
                    Some(dist) => dist.sample(&mut self.rng).max(0.0),
                    None => 1.0,
                };
                f * wsums[j]
            };
            if best.is_none_or(|(b, _)| score < b) {
                best = Some((score, j));
            }
        }
        let Some((_, new)) = best else {
            return Err(RestartReason::AllClassesForbidden);
        };
        let new = new as u32;

        for &u in self.g.neighbors(v) {
            let cu = self.class_of[u as usize];
            if cu == old {
                self.conf[u as usize] -= 1;
                if self.conf[u as usize] == 0 && !self.pinned[u as usize] {
                    self.list_remove(u);
                }
                self.conf[v as usize] -= 1;
                self.total_conflicts -= 1;
            } else if cu == new {
                self.conf[u as usize] += 1;
                if self.conf[u as usize] == 1 && !self.pinned[u as usize] {
                    self.list_add(u);
                }
                self.conf[v as usize] += 1;
                self.total_conflicts += 1;
                self.q[u as usize] += 1;
                if matches!(self.cfg.threshold_mode, ThresholdMode::AbortRestart) {
                    if let Some(limit) = self.q_max {
                        if self.q[u as usize] > limit {
                            self.threshold_tripped = true;
                        }
                    }
                }
            }
        }
        self.class_of[v as usize] = new;
        if self.conf[v as usize] == 0 {
            self.list_remove(v);
        }
        Ok(())
    }

    /// Iterates moves until the assignment is conflict-free, a restart
    /// condition fires, or the budget runs out.
    pub fn run(&mut self, budget: &Budget, clock: &RunClock) -> EliminationOutcome {
        loop {
            if self.total_conflicts == 0 {
                return EliminationOutcome::Solved(Coloring::from_assignment(&self.class_of));
            }
            if self.threshold_tripped {
                self.threshold_tripped = false;
                return EliminationOutcome::Restart(RestartReason::ThresholdExceeded);
            }
            if self.conflicted.len() > self.restart_limit {
                return EliminationOutcome::Restart(RestartReason::ConflictSetOverflow);
            }
            if budget.exhausted(clock.started_at(), self.iterations) {
                return EliminationOutcome::Abort;
            }
            self.iterations += 1;
            if let Err(reason) = self.step() {
                return EliminationOutcome::Restart(reason);
            }
            if self.cfg.paranoid && self.iterations % 4096 == 0 {
                self.check_consistency();
            }
        }
    }

    fn check_consistency(&self) {
        let mut total = 0u64;
        for (u, v) in self.g.edges() {
            if self.class_of[u as usize] == self.class_of[v as usize] {
                total += 1;
            }
        }
        assert_eq!(total, self.total_conflicts, "conflict count drifted");
        for v in 0..self.g.vertex_count() as u32 {
            let listed = self.pos_in_conflicted[v as usize] != u32::MAX;
            let should = self.conf[v as usize] > 0 && !self.pinned[v as usize];
            assert_eq!(listed, should, "conflict list wrong for {v}");
        }
    }
}
