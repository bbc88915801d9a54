//! The conflict-optimization engine over partial colorings.
//!
//! One engine instance owns its state, RNG, and iteration counter; the
//! counter (and with it the phase schedule) continues across attempts on the
//! same graph.

use super::config::{
    ConfigError, OptimizerConfig, SelectionStrategy, ThresholdMode, VictimColorStrategy,
    {weight, QIncrement},
};
use super::state::{PartialState, UNCOLORED};
use super::trace::{Budget, RunClock};
use crate::graph::{Coloring, Graph};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("no eliminable color class: target is below the pinned clique bound")]
    InfeasibleTarget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestartReason {
    /// The conflict set grew past the configured limit.
    ConflictSetOverflow,
    /// Some vertex sees an infinite-weight vertex in every class.
    AllClassesForbidden,
    /// q passed the threshold in abort mode.
    ThresholdExceeded,
}

#[derive(Debug)]
pub enum EliminationOutcome {
    Solved(Coloring),
    Restart(RestartReason),
    Abort,
}

pub struct Engine<'g> {
    g: &'g Graph,
    cfg: OptimizerConfig,
    q_max: Option<u64>,
    restart_limit: usize,
    rng: ChaCha8Rng,
    noise: Option<Normal<f64>>,
    state: PartialState,
    iterations: u64,
    threshold_tripped: bool,
    // scratch buffers for per-class neighbor counts and weight sums
    scratch_count: Vec<u32>,
    scratch_weight: Vec<f64>,
    bdfs_visited: Vec<u64>,
    bdfs_generation: u64,
    bdfs_journal: Vec<(u32, u32)>,
    bdfs_locked: u32,
    pinned_snapshot: Vec<(u32, u32)>,
}

impl<'g> Engine<'g> {
    pub fn new(g: &'g Graph, cfg: OptimizerConfig) -> Result<Self, ConfigError> {
        let seed = cfg.seed;
        Self::resume(g, cfg, ChaCha8Rng::seed_from_u64(seed), 0)
    }

    /// Builds an engine that continues an existing RNG stream and iteration
    /// counter (used by the driver across reduction rounds).
    pub fn resume(
        g: &'g Graph,
        cfg: OptimizerConfig,
        rng: ChaCha8Rng,
        iterations: u64,
    ) -> Result<Self, ConfigError> {
        cfg.validate()?;
        let q_max = cfg.resolved_q_max(g.vertex_count().max(1));
        let restart_limit = cfg.restart.resolved_limit(g.vertex_count());
        let noise = (cfg.sigma > 0.0)
            .then(|| Normal::new(1.0, cfg.sigma).expect("sigma is finite and positive"));
        Ok(Engine {
            g,
            cfg,
            q_max,
            restart_limit,
            rng,
            noise,
            state: PartialState::from_assignment(&[], 0, &[]),
            iterations,
            threshold_tripped: false,
            scratch_count: Vec::new(),
            scratch_weight: Vec::new(),
            bdfs_visited: vec![0; g.vertex_count()],
            bdfs_generation: 0,
            bdfs_journal: Vec::new(),
            bdfs_locked: UNCOLORED,
            pinned_snapshot: Vec::new(),
        })
    }

    pub fn into_parts(self) -> (ChaCha8Rng, u64) {
        (self.rng, self.iterations)
    }

    /// Loads a fully colored starting assignment (classes may be empty).
    pub fn load_assignment(&mut self, colors: &[u32], num_classes: usize, pinned: &[u32]) {
        assert_eq!(colors.len(), self.g.vertex_count());
        self.state = PartialState::from_assignment(colors, num_classes, pinned);
        self.threshold_tripped = false;
    }

    pub fn state(&self) -> &PartialState {
        &self.state
    }

    #[cfg(test)]
    pub(crate) fn state_mut(&mut self) -> &mut PartialState {
        &mut self.state
    }

    #[cfg(test)]
    pub(crate) fn set_iterations(&mut self, iterations: u64) {
        self.iterations = iterations;
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    /// Weighted scoring is active, as opposed to the pure conflict-count
    /// phase of the alternation scheme.
    pub fn weighted_phase(&self) -> bool {
        !self.cfg.phase.enabled || (self.iterations / self.cfg.phase.length) % 2 == 0
    }

    fn weight_of(&self, v: u32) -> f64 {
        if self.state.is_pinned(v) {
            return f64::INFINITY;
        }
        let threshold = match self.cfg.threshold_mode {
            ThresholdMode::InfiniteWeight => self.q_max,
            ThresholdMode::AbortRestart => None,
        };
        weight(self.state.q(v), self.cfg.exponent_p, threshold)
    }

    fn sample_factor(&mut self) -> f64 {
        match self.noise {
            Some(dist) => dist.sample(&mut self.rng).max(0.0),
            None => 1.0,
        }
    }

    fn bump_q(&mut self, v: u32) {
        let q = self.state.bump_q(v);
        if matches!(self.cfg.threshold_mode, ThresholdMode::AbortRestart) {
            if let Some(limit) = self.q_max {
                if q > limit {
                    self.threshold_tripped = true;
                }
            }
        }
    }

    /// Per-class neighbor counts and weight sums for `v`, into the scratch
    /// buffers.
    fn eval_classes(&mut self, v: u32) {
        let k = self.state.num_classes();
        if self.scratch_count.len() < k {
            self.scratch_count.resize(k, 0);
            self.scratch_weight.resize(k, 0.0);
        }
        self.scratch_count[..k].fill(0);
        self.scratch_weight[..k].fill(0.0);
        let g = self.g;
        for &u in g.neighbors(v) {
            let c = self.state.class_of(u);
            if c != UNCOLORED {
                self.scratch_count[c as usize] += 1;
                let w = if self.state.is_pinned(u) {
                    f64::INFINITY
                } else {
                    let threshold = match self.cfg.threshold_mode {
                        ThresholdMode::InfiniteWeight => self.q_max,
                        ThresholdMode::AbortRestart => None,
                    };
                    weight(self.state.q(u), self.cfg.exponent_p, threshold)
                };
                self.scratch_weight[c as usize] += w;
            }
        }
    }

    /// Conflict score of placing `v` into `class` under the current phase:
    /// f(C) times the weight sum of v's neighbors in C, or the bare neighbor
    /// count during a conflict-minimization phase.
    pub fn score_class(&mut self, v: u32, class: u32) -> f64 {
        let conflict_min = !self.weighted_phase();
        self.score_class_in_phase(v, class, conflict_min)
    }

    /// Same with the phase made explicit.
    pub fn score_class_in_phase(&mut self, v: u32, class: u32, conflict_min: bool) -> f64 {
        let g = self.g;
        let mut count = 0u32;
        let mut wsum = 0.0f64;
        for &u in g.neighbors(v) {
            if self.state.class_of(u) == class {
                count += 1;
                wsum += self.weight_of(u);
            }
        }
        if wsum.is_infinite() {
            return f64::INFINITY;
        }
        if conflict_min {
            count as f64
        } else if count == 0 {
            0.0
        } else {
            self.sample_factor() * wsum
        }
    }

    /// Eliminates one color class per the victim strategy, moving its
    /// vertices into the conflict set. Classes holding pinned vertices are
    /// never eliminated.
    pub fn remove_color_class(
        &mut self,
        strategy: Option<VictimColorStrategy>,
    ) -> Result<u32, EngineError> {
        let strategy = strategy.unwrap_or(self.cfg.victim_color_strategy);
        let victim = choose_victim(&self.state, strategy, &mut self.rng)?;
        self.state.eliminate_class(victim);
        Ok(victim)
    }

    /// Takes the next vertex from the conflict set per the selection
    /// strategy.
    pub fn pop_conflict_vertex(&mut self) -> Option<u32> {
        if self.state.conflict_len() == 0 {
            return None;
        }
        let v = match self.cfg.selection_strategy {
            SelectionStrategy::FifoQueue => self.state.pop_conflict_front()?,
            SelectionStrategy::Random => {
                let idx = self.rng.random_range(0..self.state.conflict_len());
                self.state.pop_conflict_at(idx)
            }
            SelectionStrategy::LeastConflictAfterRemoval => {
                let members: Vec<u32> = self.state.conflict_set().collect();
                let mut best_idx = 0usize;
                let mut best_key = (f64::INFINITY, u32::MAX);
                for (idx, &v) in members.iter().enumerate() {
                    let score = self.best_class_score_noise_free(v);
                    if (score, v) < best_key {
                        best_key = (score, v);
                        best_idx = idx;
                    }
                }
                self.state.pop_conflict_at(best_idx)
            }
        };
        if matches!(self.cfg.q_increment, QIncrement::OnLeave) {
            self.bump_q(v);
        }
        Some(v)
    }

    /// Cheapest class score for `v` with the noise forced off, for
    /// least-conflict selection.
    fn best_class_score_noise_free(&mut self, v: u32) -> f64 {
        self.eval_classes(v);
        let conflict_min = !self.weighted_phase();
        let k = self.state.num_classes();
        let mut best = f64::INFINITY;
        for j in 0..k {
            if self.scratch_weight[j].is_infinite() {
                continue;
            }
            let s = if conflict_min {
                self.scratch_count[j] as f64
            } else {
                self.scratch_weight[j]
            };
            if s < best {
                best = s;
            }
        }
        best
    }

    /// Places `v` into the class of lowest conflict score. Conflicting
    /// neighbors there are recolored by BDFS when possible, otherwise
    /// uncolored into the conflict set with their q bumped.
    pub fn place_vertex(&mut self, v: u32) -> Result<(), RestartReason> {
        debug_assert_eq!(self.state.class_of(v), UNCOLORED);
        debug_assert!(!self.state.in_conflict_set(v));
        self.eval_classes(v);
        let k = self.state.num_classes();

        if let Some(j) = (0..k).find(|&j| self.scratch_count[j] == 0) {
            self.state.assign(v, j as u32);
            return Ok(());
        }

        let conflict_min = !self.weighted_phase();
        let mut best: Option<(f64, usize)> = None;
        for j in 0..k {
            let wsum = self.scratch_weight[j];
            if wsum.is_infinite() {
                continue;
            }
            let score = if conflict_min {
                self.scratch_count[j] as f64
            } else {
                self.sample_factor() * wsum
            };
            if best.is_none_or(|(b, _)| score < b) {
                best = Some((score, j));
            }
        }
        let Some((_, j)) = best else {
            return Err(RestartReason::AllClassesForbidden);
        };
        let j = j as u32;

        let depth = self.cfg.bdfs.depth_for(self.state.conflict_len());
        let conflicting: Vec<u32> = self
            .g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| self.state.class_of(u) == j)
            .collect();
        self.state.assign(v, j);
        self.bdfs_locked = v;
        for u in conflicting {
            if self.state.class_of(u) != j {
                continue; // already recolored by an earlier BDFS chain
            }
            if self.cfg.bdfs.enabled && self.bdfs_recolor(u, self.cfg.bdfs.adjacency_bound, depth)
            {
                continue;
            }
            self.state.uncolor_to_conflict_set(u);
            if matches!(self.cfg.q_increment, QIncrement::OnEnter) {
                self.bump_q(u);
            }
        }
        self.bdfs_locked = UNCOLORED;
        Ok(())
    }

    /// Bounded depth-first recoloring. Tries to move `u` into a class with
    /// at most `a_max` neighbors of `u`, recursively displacing those
    /// neighbors at reduced depth. The state is only mutated on success.
    pub fn bdfs_recolor(&mut self, u: u32, a_max: usize, depth: u32) -> bool {
        self.bdfs_generation += 1;
        self.bdfs_journal.clear();
        let ok = self.bdfs_rec(u, a_max, depth);
        if !ok {
            self.bdfs_rollback_to(0);
        }
        ok
    }

    fn bdfs_rec(&mut self, u: u32, a_max: usize, depth: u32) -> bool {
        if depth == 0 || self.state.is_pinned(u) || u == self.bdfs_locked {
            return false;
        }
        if self.bdfs_visited[u as usize] == self.bdfs_generation {
            return false;
        }
        self.bdfs_visited[u as usize] = self.bdfs_generation;

        let old = self.state.class_of(u);
        let k = self.state.num_classes();
        let mut counts = vec![0u32; k];
        let mut blocked = vec![false; k];
        let g = self.g;
        for &w in g.neighbors(u) {
            let c = self.state.class_of(w);
            if c != UNCOLORED {
                counts[c as usize] += 1;
                blocked[c as usize] |=
                    self.state.is_pinned(w) || w == self.bdfs_locked;
            }
        }

        for j in 0..k as u32 {
            if j != old && counts[j as usize] == 0 {
                self.bdfs_journal.push((u, old));
                self.state.move_vertex(u, j);
                return true;
            }
        }

        for j in 0..k as u32 {
            if j == old || counts[j as usize] as usize > a_max || blocked[j as usize] {
                continue;
            }
            let checkpoint = self.bdfs_journal.len();
            let members: Vec<u32> = g
                .neighbors(u)
                .iter()
                .copied()
                .filter(|&w| self.state.class_of(w) == j)
                .collect();
            let mut ok = true;
            for w in members {
                if !self.bdfs_rec(w, a_max, depth - 1) {
                    ok = false;
                    break;
                }
            }
            // a nested chain may have moved something else into j; recheck
            if ok
                && g.neighbors(u)
                    .iter()
                    .all(|&w| self.state.class_of(w) != j)
            {
                self.bdfs_journal.push((u, old));
                self.state.move_vertex(u, j);
                return true;
            }
            self.bdfs_rollback_to(checkpoint);
        }
        false
    }

    fn bdfs_rollback_to(&mut self, checkpoint: usize) {
        while self.bdfs_journal.len() > checkpoint {
            let (w, old) = self.bdfs_journal.pop().expect("non-empty");
            if old == UNCOLORED {
                self.state.detach_to_uncolored(w);
            } else {
                self.state.move_vertex(w, old);
            }
        }
    }

    /// Pops and places until the conflict set empties (solved), a restart
    /// condition fires, or the budget runs out.
    pub fn run_elimination(&mut self, budget: &Budget, clock: &RunClock) -> EliminationOutcome {
        if self.cfg.paranoid {
            self.pinned_snapshot = (0..self.g.vertex_count() as u32)
                .filter(|&v| self.state.is_pinned(v))
                .map(|v| (v, self.state.class_of(v)))
                .collect();
        }
        loop {
            if self.state.conflict_len() == 0 {
                return EliminationOutcome::Solved(self.state.to_coloring());
            }
            if self.threshold_tripped {
                self.threshold_tripped = false;
                return EliminationOutcome::Restart(RestartReason::ThresholdExceeded);
            }
            if self.state.conflict_len() > self.restart_limit {
                return EliminationOutcome::Restart(RestartReason::ConflictSetOverflow);
            }
            if budget.exhausted(clock.started_at(), self.iterations) {
                return EliminationOutcome::Abort;
            }
            let v = self.pop_conflict_vertex().expect("conflict set is non-empty");
            self.iterations += 1;
            if let Err(reason) = self.place_vertex(v) {
                return EliminationOutcome::Restart(reason);
            }
            if self.cfg.paranoid {
                self.paranoid_check(v);
            }
        }
    }

    fn paranoid_check(&self, placed: u32) {
        // vertex conservation at the iteration boundary
        assert_eq!(
            self.state.colored_count() + self.state.conflict_len(),
            self.g.vertex_count(),
            "vertex conservation violated"
        );
        // local partial validity around the placed vertex
        let c = self.state.class_of(placed);
        assert_ne!(c, UNCOLORED);
        for &u in self.g.neighbors(placed) {
            assert_ne!(
                self.state.class_of(u),
                c,
                "monochromatic edge after placing {placed}"
            );
        }
        // pinned vertices never move and never enter the conflict set
        for &(v, class) in &self.pinned_snapshot {
            assert_eq!(self.state.class_of(v), class, "pinned vertex {v} moved");
            assert!(!self.state.in_conflict_set(v));
        }
        if self.iterations % 4096 == 0 {
            self.state.check_consistency(self.g);
        }
    }
}

/// Picks the class to eliminate: smallest (ties by index) or uniformly at
/// random, never a class holding a pinned vertex.
pub(crate) fn choose_victim(
    state: &PartialState,
    strategy: VictimColorStrategy,
    rng: &mut ChaCha8Rng,
) -> Result<u32, EngineError> {
    if state.num_classes() < 2 {
        return Err(EngineError::InfeasibleTarget);
    }
    let eligible: Vec<u32> = (0..state.num_classes() as u32)
        .filter(|&c| !state.class_has_pinned(c))
        .collect();
    if eligible.is_empty() {
        return Err(EngineError::InfeasibleTarget);
    }
    Ok(match strategy {
        VictimColorStrategy::SmallestClass => eligible
            .iter()
            .copied()
            .min_by_key(|&c| (state.class_size(c), c))
            .expect("non-empty"),
        VictimColorStrategy::Random => eligible[rng.random_range(0..eligible.len())],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::optimizer::config::{BdfsConfig, ClockMode, QMaxSetting};

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                edges.push((u, v));
            }
        }
        build_graph(n, &edges).unwrap()
    }

    fn quiet_cfg() -> OptimizerConfig {
        OptimizerConfig {
            sigma: 0.0,
            clique_pinning: false,
            use_degeneracy: false,
            ..OptimizerConfig::default()
        }
    }

    #[test]
    fn remove_smallest_class() {
        // classes of sizes 5, 3, 9
        let mut colors = vec![0u32; 5];
        colors.extend(vec![1u32; 3]);
        colors.extend(vec![2u32; 9]);
        let g = build_graph(17, &[]).unwrap();
        let mut engine = Engine::new(&g, quiet_cfg()).unwrap();
        engine.load_assignment(&colors, 3, &[]);
        let victim = engine.remove_color_class(None).unwrap();
        assert_eq!(victim, 1);
        assert_eq!(engine.state().conflict_len(), 3);
        assert_eq!(engine.state().num_classes(), 2);
    }

    #[test]
    fn remove_with_all_classes_pinned_is_infeasible() {
        let g = complete(3);
        let mut engine = Engine::new(&g, quiet_cfg()).unwrap();
        engine.load_assignment(&[0, 1, 2], 3, &[0, 1, 2]);
        assert_eq!(
            engine.remove_color_class(None).unwrap_err(),
            EngineError::InfeasibleTarget
        );
    }

    #[test]
    fn random_removal_is_reproducible() {
        let mut colors = vec![0u32; 4];
        colors.extend([1, 1, 2, 2, 2]);
        let g = build_graph(9, &[]).unwrap();
        let mut cfg = quiet_cfg();
        cfg.victim_color_strategy = VictimColorStrategy::Random;
        cfg.seed = 99;
        let pick = |cfg: &OptimizerConfig| {
            let mut engine = Engine::new(&g, cfg.clone()).unwrap();
            engine.load_assignment(&colors, 3, &[]);
            let victim = engine.remove_color_class(None).unwrap();
            let s: Vec<u32> = engine.state().conflict_set().collect();
            (victim, s)
        };
        assert_eq!(pick(&cfg), pick(&cfg));
    }

    #[test]
    fn fifo_pop_order() {
        let g = build_graph(8, &[]).unwrap();
        let mut engine = Engine::new(&g, quiet_cfg()).unwrap();
        engine.load_assignment(&[0; 8], 1, &[]);
        for v in [4u32, 7, 2] {
            engine.state_mut().uncolor_to_conflict_set(v);
        }
        assert_eq!(engine.pop_conflict_vertex(), Some(4));
        assert_eq!(engine.pop_conflict_vertex(), Some(7));
        assert_eq!(engine.pop_conflict_vertex(), Some(2));
        assert_eq!(engine.pop_conflict_vertex(), None);
    }

    #[test]
    fn singleton_pop_any_strategy() {
        for strategy in [
            SelectionStrategy::FifoQueue,
            SelectionStrategy::Random,
            SelectionStrategy::LeastConflictAfterRemoval,
        ] {
            let g = build_graph(3, &[(0, 1)]).unwrap();
            let mut cfg = quiet_cfg();
            cfg.selection_strategy = strategy;
            let mut engine = Engine::new(&g, cfg).unwrap();
            engine.load_assignment(&[0, 1, 0], 2, &[]);
            engine.state_mut().uncolor_to_conflict_set(2);
            assert_eq!(engine.pop_conflict_vertex(), Some(2));
        }
    }

    #[test]
    fn least_conflict_prefers_free_class() {
        // vertex 4 has a zero-score class available, vertex 3 does not
        let g = build_graph(5, &[(3, 0), (3, 1), (4, 0)]).unwrap();
        let mut cfg = quiet_cfg();
        cfg.selection_strategy = SelectionStrategy::LeastConflictAfterRemoval;
        let mut engine = Engine::new(&g, cfg).unwrap();
        engine.load_assignment(&[0, 1, 0, 0, 1], 2, &[]);
        engine.state_mut().uncolor_to_conflict_set(3);
        engine.state_mut().uncolor_to_conflict_set(4);
        // enumerate: v=3 scores {class0: w(0)=1, class1: w(1)=1} -> best 1
        //            v=4 scores {class0: 1, class1: 0} -> best 0
        assert_eq!(engine.pop_conflict_vertex(), Some(4));
    }

    #[test]
    fn score_class_values() {
        let g = build_graph(4, &[(3, 0), (3, 1)]).unwrap();
        let mut engine = Engine::new(&g, quiet_cfg()).unwrap();
        engine.load_assignment(&[0, 0, 1, 1], 2, &[]);
        engine.state_mut().uncolor_to_conflict_set(3);
        // no neighbors in class 1
        assert_eq!(engine.score_class(3, 1), 0.0);
        // neighbors 0 and 1 with q=1 and q=2 at p=1.2
        engine.state_mut().bump_q(0);
        engine.state_mut().bump_q(1);
        engine.state_mut().bump_q(1);
        let expected = 2.0 + (1.0 + 2f64.powf(1.2));
        assert!((engine.score_class(3, 0) - expected).abs() < 1e-12);
        // conflict-minimization phase scores the bare count
        assert_eq!(engine.score_class_in_phase(3, 0, true), 2.0);
    }

    #[test]
    fn conflict_min_phase_follows_iteration_counter() {
        let g = build_graph(2, &[]).unwrap();
        let mut cfg = quiet_cfg();
        cfg.phase.enabled = true;
        cfg.phase.length = 10;
        let mut engine = Engine::new(&g, cfg).unwrap();
        assert!(engine.weighted_phase());
        engine.set_iterations(10);
        assert!(!engine.weighted_phase());
        engine.set_iterations(20);
        assert!(engine.weighted_phase());
    }

    #[test]
    fn place_prefers_free_class() {
        let g = build_graph(4, &[(3, 0)]).unwrap();
        let mut engine = Engine::new(&g, quiet_cfg()).unwrap();
        engine.load_assignment(&[0, 1, 1, 1], 2, &[]);
        engine.state_mut().uncolor_to_conflict_set(3);
        let v = engine.pop_conflict_vertex().unwrap();
        engine.place_vertex(v).unwrap();
        assert_eq!(engine.state().class_of(3), 1);
        assert_eq!(engine.state().conflict_len(), 0);
        assert_eq!(engine.state().q(0), 0);
    }

    #[test]
    fn place_uncolors_cheapest_class_neighbor() {
        // v=2 adjacent to both classes; class 0 neighbor has lower weight sum
        let g = build_graph(4, &[(2, 0), (2, 1), (2, 3)]).unwrap();
        let mut engine = Engine::new(&g, quiet_cfg()).unwrap();
        engine.load_assignment(&[0, 1, 0, 1], 2, &[]);
        engine.state_mut().uncolor_to_conflict_set(2);
        engine.state_mut().bump_q(1); // class 1 side now costs more
        engine.state_mut().bump_q(3);
        let v = engine.pop_conflict_vertex().unwrap();
        engine.place_vertex(v).unwrap();
        assert_eq!(engine.state().class_of(2), 0);
        assert_eq!(engine.state().class_of(0), UNCOLORED);
        assert!(engine.state().in_conflict_set(0));
        assert_eq!(engine.state().q(0), 1);
    }

    #[test]
    fn place_with_pinned_everywhere_signals_restart() {
        let g = complete(4);
        let mut engine = Engine::new(&g, quiet_cfg()).unwrap();
        engine.load_assignment(&[0, 1, 2, 0], 3, &[0, 1, 2]);
        engine.state_mut().uncolor_to_conflict_set(3);
        let v = engine.pop_conflict_vertex().unwrap();
        assert_eq!(
            engine.place_vertex(v).unwrap_err(),
            RestartReason::AllClassesForbidden
        );
    }

    #[test]
    fn bdfs_free_class_succeeds_depth_zero_fails() {
        let g = build_graph(3, &[(0, 1)]).unwrap();
        let mut cfg = quiet_cfg();
        cfg.bdfs = BdfsConfig::standard();
        let mut engine = Engine::new(&g, cfg).unwrap();
        engine.load_assignment(&[0, 1, 1], 2, &[]);
        engine.state_mut().detach_to_uncolored(0);
        assert!(!engine.bdfs_recolor(0, 3, 0));
        assert_eq!(engine.state().class_of(0), UNCOLORED);
        assert!(engine.bdfs_recolor(0, 3, 1));
        assert_eq!(engine.state().class_of(0), 0);
    }

    #[test]
    fn bdfs_chain_of_two_recolorings() {
        // classes C0={1*,4} C1={2,5} C2={3,6*} (* pinned). Vertex 0 sees one
        // neighbor in every class, so no class is free. Vertex 2 is wedged by
        // the pins, and vertices 5 is too; the only way in is through C2:
        // move 4 to C1, then 3 to C0, then place 0 in C2. That chain needs
        // depth 3.
        let g = build_graph(
            7,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (2, 1),
                (2, 6),
                (3, 4),
                (3, 5),
                (5, 1),
                (5, 6),
            ],
        )
        .unwrap();
        let mut cfg = quiet_cfg();
        cfg.bdfs = BdfsConfig::standard();
        let mut engine = Engine::new(&g, cfg).unwrap();
        engine.load_assignment(&[0, 0, 1, 2, 0, 1, 2], 3, &[1, 6]);
        engine.state_mut().detach_to_uncolored(0);

        // no class is free for vertex 0
        for j in 0..3u32 {
            let blocked = g
                .neighbors(0)
                .iter()
                .any(|&u| engine.state().class_of(u) == j);
            assert!(blocked, "class {j} should not be free for vertex 0");
        }

        assert!(!engine.bdfs_recolor(0, 3, 2), "depth 2 cannot finish the chain");
        assert_eq!(engine.state().class_of(0), UNCOLORED);
        assert_eq!(engine.state().class_of(3), 2, "failure must not mutate");
        assert_eq!(engine.state().class_of(4), 0);

        assert!(engine.bdfs_recolor(0, 3, 3));
        assert_eq!(engine.state().class_of(0), 2);
        assert_eq!(engine.state().class_of(3), 0);
        assert_eq!(engine.state().class_of(4), 1);
        engine.state_mut().check_consistency(&g);
        // q untouched by BDFS successes
        assert!((0..7).all(|v| engine.state().q(v) == 0));
    }

    #[test]
    fn run_elimination_solves_c4_down_to_two() {
        let g = build_graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let mut engine = Engine::new(&g, quiet_cfg()).unwrap();
        engine.load_assignment(&[0, 1, 0, 2], 3, &[]);
        engine.remove_color_class(None).unwrap();
        let budget = Budget::iterations(10_000);
        let clock = RunClock::start(ClockMode::Logical);
        match engine.run_elimination(&budget, &clock) {
            EliminationOutcome::Solved(c) => {
                assert_eq!(c.num_colors(), 2);
                assert!(crate::graph::validate_coloring(&g, &c).unwrap().valid);
            }
            other => panic!("expected solved, got {other:?}"),
        }
    }

    #[test]
    fn run_elimination_on_k4_at_three_never_solves() {
        let g = complete(4);
        let mut cfg = quiet_cfg();
        cfg.restart.conflict_set_limit = Some(3);
        let mut engine = Engine::new(&g, cfg).unwrap();
        engine.load_assignment(&[0, 1, 2, 3], 4, &[]);
        engine.remove_color_class(None).unwrap();
        let budget = Budget::iterations(5_000);
        let clock = RunClock::start(ClockMode::Logical);
        match engine.run_elimination(&budget, &clock) {
            EliminationOutcome::Solved(_) => panic!("K4 is not 3-colorable"),
            EliminationOutcome::Restart(_) | EliminationOutcome::Abort => {}
        }
    }

    #[test]
    fn elimination_is_deterministic_for_fixed_seed() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut edges = Vec::new();
        for u in 0..20u32 {
            for v in u + 1..20 {
                if rng.random_bool(0.4) {
                    edges.push((u, v));
                }
            }
        }
        let g = build_graph(20, &edges).unwrap();
        let init = crate::init::dsatur(&g);
        let run = || {
            let mut cfg = quiet_cfg();
            cfg.seed = 77;
            cfg.sigma = 0.15;
            let mut engine = Engine::new(&g, cfg).unwrap();
            engine.load_assignment(init.colors(), init.num_colors(), &[]);
            engine.remove_color_class(None).unwrap();
            let budget = Budget::iterations(2_000);
            let clock = RunClock::start(ClockMode::Logical);
            let out = engine.run_elimination(&budget, &clock);
            let solved = match out {
                EliminationOutcome::Solved(c) => Some(c.colors().to_vec()),
                _ => None,
            };
            (solved, engine.iterations())
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn threshold_abort_mode_restarts() {
        let g = complete(4);
        let mut cfg = quiet_cfg();
        cfg.threshold_mode = ThresholdMode::AbortRestart;
        cfg.q_max = QMaxSetting::Fixed(2);
        cfg.restart.conflict_set_limit = Some(1000);
        let mut engine = Engine::new(&g, cfg).unwrap();
        engine.load_assignment(&[0, 1, 2, 3], 4, &[]);
        engine.remove_color_class(None).unwrap();
        let budget = Budget::iterations(100_000);
        let clock = RunClock::start(ClockMode::Logical);
        match engine.run_elimination(&budget, &clock) {
            EliminationOutcome::Restart(RestartReason::ThresholdExceeded) => {}
            other => panic!("expected threshold restart, got {other:?}"),
        }
    }
}
