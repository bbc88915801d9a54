//! Brute-force chromatic number for small graphs.
//!
//! Iterative deepening on the color count with backtracking, seeded by a
//! greedy clique lower bound. Capped at 20 vertices; this exists to give
//! tests an obviously correct reference, not to compete with the solver.

use crate::graph::Graph;
use thiserror::Error;

pub const EXACT_VERTEX_LIMIT: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("graph has {0} vertices, exact search is capped at {EXACT_VERTEX_LIMIT}")]
    GraphTooLarge(usize),
}

/// Computes the chromatic number of `g` exactly.
pub fn exact_chromatic_number(g: &Graph) -> Result<usize, ExactError> {
    let n = g.vertex_count();
    if n > EXACT_VERTEX_LIMIT {
        return Err(ExactError::GraphTooLarge(n));
    }
    if n == 0 {
        return Ok(0);
    }
    if g.edge_count() == 0 {
        return Ok(1);
    }

    // Order vertices by decreasing degree so the branching hits the dense
    // part first, and start k at a greedy clique bound.
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let lower = greedy_clique_size(g, &order);

    for k in lower..=n {
        let mut colors = vec![u32::MAX; n];
        if color_backtrack(g, &order, 0, k, &mut colors) {
            return Ok(k);
        }
    }
    unreachable!("every graph is n-colorable");
}

/// True iff `g` admits a proper coloring with at most `k` colors.
pub fn is_k_colorable(g: &Graph, k: usize) -> Result<bool, ExactError> {
    let n = g.vertex_count();
    if n > EXACT_VERTEX_LIMIT {
        return Err(ExactError::GraphTooLarge(n));
    }
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut colors = vec![u32::MAX; n];
    Ok(color_backtrack(g, &order, 0, k, &mut colors))
}

fn greedy_clique_size(g: &Graph, order: &[u32]) -> usize {
    let mut clique: Vec<u32> = Vec::new();
    for &v in order {
        if clique.iter().all(|&u| g.has_edge(u, v)) {
            clique.push(v);
        }
    }
    clique.len().max(1)
}

fn color_backtrack(g: &Graph, order: &[u32], idx: usize, k: usize, colors: &mut Vec<u32>) -> bool {
    if idx == order.len() {
        return true;
    }
    let v = order[idx];
    let mut forbidden = 0u32;
    for &u in g.neighbors(v) {
        let c = colors[u as usize];
        if c != u32::MAX {
            forbidden |= 1 << c;
        }
    }
    // Symmetry breaking: a vertex may open at most one fresh color, so only
    // colors up to (max used so far + 1) are tried.
    let used_so_far = order[..idx]
        .iter()
        .map(|&u| colors[u as usize] + 1)
        .max()
        .unwrap_or(0);
    let limit = (used_so_far as usize + 1).min(k);
    for c in 0..limit as u32 {
        if forbidden & (1 << c) == 0 {
            colors[v as usize] = c;
            if color_backtrack(g, order, idx + 1, k, colors) {
                return true;
            }
            colors[v as usize] = u32::MAX;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                edges.push((u, v));
            }
        }
        build_graph(n, &edges).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
        build_graph(n, &edges).unwrap()
    }

    pub(crate) fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        build_graph(10, &edges).unwrap()
    }

    #[test]
    fn complete_graphs() {
        assert_eq!(exact_chromatic_number(&complete(4)).unwrap(), 4);
        assert_eq!(exact_chromatic_number(&complete(1)).unwrap(), 1);
    }

    #[test]
    fn odd_cycle() {
        assert_eq!(exact_chromatic_number(&cycle(5)).unwrap(), 3);
        assert_eq!(exact_chromatic_number(&cycle(6)).unwrap(), 2);
    }

    #[test]
    fn petersen_is_3_chromatic() {
        // Independent check: enumerate raw 3^10 assignments for a valid
        // 3-coloring and rule out 2-colorability by the same scan.
        let g = petersen();
        assert_eq!(exact_chromatic_number(&g).unwrap(), 3);
        assert!(exhaustive_k_colorable(&g, 3));
        assert!(!exhaustive_k_colorable(&g, 2));
    }

    #[test]
    fn too_large_rejected() {
        let g = build_graph(21, &[(0, 1)]).unwrap();
        assert_eq!(
            exact_chromatic_number(&g).unwrap_err(),
            ExactError::GraphTooLarge(21)
        );
    }

    /// Pruning-free exhaustive search, counting in base k. Test oracle only.
    pub(crate) fn exhaustive_k_colorable(g: &Graph, k: usize) -> bool {
        let n = g.vertex_count();
        if n == 0 {
            return true;
        }
        if k == 0 {
            return false;
        }
        let mut assignment = vec![0u32; n];
        loop {
            let valid = g
                .edges()
                .all(|(u, v)| assignment[u as usize] != assignment[v as usize]);
            if valid {
                return true;
            }
            // increment base-k counter
            let mut pos = 0;
            loop {
                if pos == n {
                    return false;
                }
                assignment[pos] += 1;
                if assignment[pos] as usize == k {
                    assignment[pos] = 0;
                    pos += 1;
                } else {
                    break;
                }
            }
        }
    }

    #[test]
    fn agrees_with_exhaustive_search_on_small_graphs() {
        // All graphs on up to 5 vertices.
        for n in 0..=5usize {
            let pairs: Vec<(u32, u32)> = (0..n as u32)
                .flat_map(|u| (u + 1..n as u32).map(move |v| (u, v)))
                .collect();
            for mask in 0u32..1 << pairs.len() {
                let edges: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &e)| e)
                    .collect();
                let g = build_graph(n, &edges).unwrap();
                let chi = exact_chromatic_number(&g).unwrap();
                if n > 0 {
                    assert!(exhaustive_k_colorable(&g, chi), "n={n} mask={mask}");
                    assert!(!exhaustive_k_colorable(&g, chi - 1), "n={n} mask={mask}");
                } else {
                    assert_eq!(chi, 0);
                }
            }
        }
    }

    #[test]
    fn agrees_with_exhaustive_search_on_random_graphs() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 6..=8usize {
            for _ in 0..4 {
                let mut edges = Vec::new();
                for u in 0..n as u32 {
                    for v in u + 1..n as u32 {
                        if rng.random_bool(0.5) {
                            edges.push((u, v));
                        }
                    }
                }
                let g = build_graph(n, &edges).unwrap();
                let chi = exact_chromatic_number(&g).unwrap();
                assert!(exhaustive_k_colorable(&g, chi));
                if chi > 1 {
                    assert!(!exhaustive_k_colorable(&g, chi - 1));
                }
            }
        }
    }
}
