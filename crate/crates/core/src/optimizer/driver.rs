//! Outer optimization driver: degeneracy reduction per color target,
//! repeated elimination attempts with shuffled restarts, and the trace of
//! improvements.

use super::config::{Neighborhood, OptimizerConfig, VictimColorStrategy};
use super::engine::{EliminationOutcome, Engine};
use super::tabu::TabuRun;
use super::trace::{Budget, RunClock, TraceEvent, TraceRow};
use crate::clique::{best_clique, verify_clique, CliqueSet};
use crate::graph::{validate_coloring, Coloring, ColoringError, Graph};
use crate::reduce::{degeneracy_easy_vertices, extend_coloring_to_easy};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::Duration;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OptimizeError {
    #[error(transparent)]
    Config(#[from] super::config::ConfigError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error("initial coloring is invalid on this graph")]
    InvalidInitialColoring,
    #[error("pinned clique is not a clique of the graph")]
    InvalidPinnedClique,
}

enum RoundEnd {
    Solved(Coloring),
    Infeasible,
    Budget,
}

/// Runs the conflict optimizer from a valid initial coloring, repeatedly
/// targeting one color less, and returns the best coloring found together
/// with the event trace.
pub fn optimize(
    g: &Graph,
    initial: &Coloring,
    cfg: &OptimizerConfig,
    budget: &Budget,
) -> Result<(Coloring, Vec<TraceRow>), OptimizeError> {
    optimize_with_observer(g, initial, cfg, budget, |_| {})
}

/// As [`optimize`], also streaming each trace row to `observer` as it
/// happens.
pub fn optimize_with_observer(
    g: &Graph,
    initial: &Coloring,
    cfg: &OptimizerConfig,
    budget: &Budget,
    mut observer: impl FnMut(&TraceRow),
) -> Result<(Coloring, Vec<TraceRow>), OptimizeError> {
    cfg.validate()?;
    let clock = RunClock::start(cfg.clock);
    if !validate_coloring(g, initial)?.valid {
        return Err(OptimizeError::InvalidInitialColoring);
    }
    let mut trace: Vec<TraceRow> = Vec::new();
    let mut best = initial.clone();

    let pinned_full: Vec<u32> = if cfg.clique_pinning {
        match &cfg.pinned_clique {
            Some(vs) => {
                let c = CliqueSet::new(vs.clone());
                if !verify_clique(g, &c) {
                    return Err(OptimizeError::InvalidPinnedClique);
                }
                c.vertices().to_vec()
            }
            None => {
                let seed = derive_seed(cfg.seed, 0xC11C);
                best_clique(g, seed, 8, Duration::from_secs(2))
                    .vertices()
                    .to_vec()
            }
        }
    } else {
        Vec::new()
    };
    let lower_bound = pinned_full.len().max(1);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut iterations: u64 = 0;

    'rounds: while best.num_colors() > lower_bound
        && !budget.exhausted(clock.started_at(), iterations)
    {
        let k_target = best.num_colors() - 1;
        let reduction = cfg
            .use_degeneracy
            .then(|| degeneracy_easy_vertices(g, k_target));
        let (work_graph, work_colors, work_pinned): (&Graph, Vec<u32>, Vec<u32>) =
            match &reduction {
                Some(r) => (
                    &r.reduced,
                    r.kept.iter().map(|&v| best.color(v)).collect(),
                    pinned_full
                        .iter()
                        .filter_map(|&v| r.kept.binary_search(&v).ok().map(|i| i as u32))
                        .collect(),
                ),
                None => (g, best.colors().to_vec(), pinned_full.clone()),
            };
        let base_classes = best.num_colors();

        let mut attempt: u64 = 0;
        let end = loop {
            if budget.exhausted(clock.started_at(), iterations) {
                break RoundEnd::Budget;
            }
            let victim = if attempt > 0 && cfg.multistart {
                VictimColorStrategy::Random
            } else {
                cfg.victim_color_strategy
            };
            let (colors_now, classes_now) = if attempt == 0 {
                (work_colors.clone(), base_classes)
            } else {
                shuffle_assignment(
                    work_graph,
                    &work_colors,
                    base_classes,
                    cfg.restart.shuffle_fraction,
                    &mut rng,
                    &work_pinned,
                )
            };

            let taken = std::mem::replace(&mut rng, ChaCha8Rng::seed_from_u64(0));
            let outcome = match cfg.neighborhood {
                Neighborhood::Partial => {
                    let mut engine = Engine::resume(work_graph, cfg.clone(), taken, iterations)
                        .expect("config already validated");
                    engine.load_assignment(&colors_now, classes_now, &work_pinned);
                    let mut infeasible = false;
                    while engine.state().num_classes() > k_target {
                        if engine.remove_color_class(Some(victim)).is_err() {
                            infeasible = true;
                            break;
                        }
                    }
                    let out = (!infeasible).then(|| engine.run_elimination(budget, &clock));
                    let (r, it) = engine.into_parts();
                    rng = r;
                    iterations = it;
                    match out {
                        Some(o) => o,
                        None => break RoundEnd::Infeasible,
                    }
                }
                Neighborhood::Tabucol => {
                    let mut run = TabuRun::resume(work_graph, cfg.clone(), taken, iterations)
                        .expect("config already validated");
                    let loaded = run.load_with_target(
                        &colors_now,
                        classes_now,
                        &work_pinned,
                        k_target,
                        victim,
                    );
                    let out = loaded.is_ok().then(|| run.run(budget, &clock));
                    let (r, it) = run.into_parts();
                    rng = r;
                    iterations = it;
                    match out {
                        Some(o) => o,
                        None => break RoundEnd::Infeasible,
                    }
                }
            };

            match outcome {
                EliminationOutcome::Solved(c) => break RoundEnd::Solved(c),
                EliminationOutcome::Restart(_) => {
                    attempt += 1;
                    let event = if cfg.multistart {
                        TraceEvent::Multistart
                    } else {
                        TraceEvent::Restart
                    };
                    let row = TraceRow {
                        elapsed_seconds: clock.elapsed_seconds(iterations),
                        iteration: iterations,
                        colors: best.num_colors(),
                        event,
                    };
                    observer(&row);
                    trace.push(row);
                }
                EliminationOutcome::Abort => break RoundEnd::Budget,
            }
        };

        match end {
            RoundEnd::Solved(reduced) => {
                let full = match &reduction {
                    Some(r) => extend_coloring_to_easy(g, &reduced, r)
                        .expect("a solved reduced coloring always extends"),
                    None => reduced,
                };
                debug_assert!(validate_coloring(g, &full).expect("length matches").valid);
                best = full;
                let row = TraceRow {
                    elapsed_seconds: clock.elapsed_seconds(iterations),
                    iteration: iterations,
                    colors: best.num_colors(),
                    event: TraceEvent::Improved,
                };
                observer(&row);
                trace.push(row);
            }
            RoundEnd::Infeasible => break 'rounds,
            RoundEnd::Budget => {
                let row = TraceRow {
                    elapsed_seconds: clock.elapsed_seconds(iterations),
                    iteration: iterations,
                    colors: best.num_colors(),
                    event: TraceEvent::Abort,
                };
                observer(&row);
                trace.push(row);
                break 'rounds;
            }
        }
    }
    Ok((best, trace))
}

/// Runs independent optimizers with derived seeds in parallel and keeps the
/// best result (ties go to the lowest worker index).
pub fn optimize_multistart(
    g: &Graph,
    initial: &Coloring,
    cfg: &OptimizerConfig,
    budget: &Budget,
    workers: usize,
) -> Result<(Coloring, Vec<TraceRow>), OptimizeError> {
    if workers <= 1 {
        return optimize(g, initial, cfg, budget);
    }
    let results: Vec<Result<(Coloring, Vec<TraceRow>), OptimizeError>> = (0..workers)
        .into_par_iter()
        .map(|w| {
            let mut worker_cfg = cfg.clone();
            worker_cfg.seed = derive_seed(cfg.seed, w as u64);
            optimize(g, initial, &worker_cfg, budget)
        })
        .collect();
    let mut best: Option<(Coloring, Vec<TraceRow>)> = None;
    for r in results {
        let pair = r?;
        let better = best
            .as_ref()
            .is_none_or(|(b, _)| pair.0.num_colors() < b.num_colors());
        if better {
            best = Some(pair);
        }
    }
    Ok(best.expect("at least one worker"))
}

/// Moves roughly `fraction` of the unpinned vertices each to a class other
/// than its current one, greedily, opening fresh classes when nothing else
/// fits. The assignment stays valid; the class count may grow.
pub fn shuffle_assignment(
    g: &Graph,
    colors: &[u32],
    num_classes: usize,
    fraction: f64,
    rng: &mut ChaCha8Rng,
    pinned: &[u32],
) -> (Vec<u32>, usize) {
    let n = colors.len();
    let mut is_pinned = vec![false; n];
    for &v in pinned {
        is_pinned[v as usize] = true;
    }
    let pool: Vec<u32> = (0..n as u32).filter(|&v| !is_pinned[v as usize]).collect();
    let count = ((n as f64 * fraction).ceil() as usize).min(pool.len());
    let selected: Vec<u32> = rand::seq::index::sample(rng, pool.len(), count)
        .into_iter()
        .map(|i| pool[i])
        .collect();

    let mut out = colors.to_vec();
    for &v in &selected {
        out[v as usize] = u32::MAX;
    }
    let mut k = num_classes;
    let mut forbidden = Vec::new();
    for &v in &selected {
        let old = colors[v as usize];
        forbidden.clear();
        forbidden.resize(k, false);
        for &u in g.neighbors(v) {
            let c = out[u as usize];
            if c != u32::MAX {
                forbidden[c as usize] = true;
            }
        }
        match (0..k as u32).find(|&c| c != old && !forbidden[c as usize]) {
            Some(c) => out[v as usize] = c,
            None => {
                out[v as usize] = k as u32;
                k += 1;
            }
        }
    }
    (out, k)
}

fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed.wrapping_add((stream + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
