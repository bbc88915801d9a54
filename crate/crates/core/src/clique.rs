//! Heuristic cliques: lower bounds for the color count, pin targets for the
//! optimizer, and optimality certificates when the bound is met.

use crate::graph::Graph;
use rand::prelude::*;
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CliqueError {
    #[error("input vertex set is not a clique")]
    NotAClique,
}

/// A set of pairwise-adjacent vertices, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueSet {
    vertices: Vec<u32>,
}

impl CliqueSet {
    pub fn new(mut vertices: Vec<u32>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        CliqueSet { vertices }
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// True iff every pair in the set is adjacent.
pub fn verify_clique(g: &Graph, c: &CliqueSet) -> bool {
    let vs = c.vertices();
    vs.iter()
        .enumerate()
        .all(|(i, &u)| vs[i + 1..].iter().all(|&v| g.has_edge(u, v)))
}

/// Grows a maximal clique from a random high-degree seed, repeatedly adding
/// a common neighbor of maximum degree (degree ties broken at random so
/// restarts explore different maximal cliques).
pub fn greedy_clique(g: &Graph, rng: &mut impl Rng) -> CliqueSet {
    let n = g.vertex_count();
    if n == 0 {
        return CliqueSet::new(vec![]);
    }
    let mut by_degree: Vec<u32> = (0..n as u32).collect();
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let pool = (n / 10).clamp(1, n).max(10.min(n));
    let seed = by_degree[rng.random_range(0..pool)];

    let mut clique = vec![seed];
    let mut candidates: Vec<u32> = g.neighbors(seed).to_vec();
    while !candidates.is_empty() {
        let top = candidates.iter().map(|&v| g.degree(v)).max().expect("non-empty");
        let tied: Vec<u32> = candidates
            .iter()
            .copied()
            .filter(|&v| g.degree(v) == top)
            .collect();
        let next = tied[rng.random_range(0..tied.len())];
        clique.push(next);
        candidates.retain(|&v| v != next && g.has_edge(v, next));
    }
    CliqueSet::new(clique)
}

/// Local search around a clique: add any common neighbor, or swap one vertex
/// out when that lets two come in. Never returns a smaller clique.
pub fn improve_clique(
    g: &Graph,
    c: &CliqueSet,
    budget: Duration,
) -> Result<CliqueSet, CliqueError> {
    if !verify_clique(g, c) {
        return Err(CliqueError::NotAClique);
    }
    let deadline = Instant::now() + budget;
    let mut best: Vec<u32> = c.vertices().to_vec();

    'outer: loop {
        // grow: any vertex adjacent to the whole clique
        let mut grown = false;
        for v in 0..g.vertex_count() as u32 {
            if best.binary_search(&v).is_err() && best.iter().all(|&u| g.has_edge(u, v)) {
                let pos = best.binary_search(&v).unwrap_err();
                best.insert(pos, v);
                grown = true;
            }
        }
        if grown {
            continue;
        }
        if Instant::now() >= deadline {
            break;
        }
        // swap one out, try to bring two in
        for i in 0..best.len() {
            let removed = best[i];
            let rest: Vec<u32> = best
                .iter()
                .copied()
                .filter(|&u| u != removed)
                .collect();
            let candidates: Vec<u32> = (0..g.vertex_count() as u32)
                .filter(|&v| v != removed && rest.binary_search(&v).is_err())
                .filter(|&v| rest.iter().all(|&u| g.has_edge(u, v)))
                .collect();
            for (ai, &a) in candidates.iter().enumerate() {
                for &b in &candidates[ai + 1..] {
                    if g.has_edge(a, b) {
                        let mut improved = rest.clone();
                        improved.extend([a, b]);
                        improved.sort_unstable();
                        best = improved;
                        continue 'outer;
                    }
                }
            }
            if Instant::now() >= deadline {
                break 'outer;
            }
        }
        break;
    }
    Ok(CliqueSet::new(best))
}

/// Repeated greedy restarts plus local search, keeping the largest clique.
pub fn best_clique(g: &Graph, seed: u64, restarts: usize, budget: Duration) -> CliqueSet {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let deadline = Instant::now() + budget;
    let per_restart = budget / (restarts.max(1) as u32 * 4);
    let mut best = CliqueSet::new(vec![]);
    for _ in 0..restarts.max(1) {
        let c = greedy_clique(g, &mut rng);
        let c = improve_clique(g, &c, per_restart).expect("greedy clique is valid");
        if c.len() > best.len() {
            best = c;
        }
        if Instant::now() >= deadline {
            break;
        }
    }
    best
}
