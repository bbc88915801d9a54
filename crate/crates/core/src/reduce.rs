//! Degeneracy-based easy-vertex reduction.
//!
//! For a target color count k, vertices that can be iteratively removed while
//! having at most k-1 remaining neighbors are "easy": once the rest of the
//! graph is colored with at least k colors, they can be greedily colored in
//! reverse removal order without opening a new color.

use crate::graph::{build_graph, validate_coloring, Coloring, ColoringError, Graph};
use std::cmp::Reverse;
use std::collections::BinaryHeap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtendError {
    #[error("partial coloring is invalid on the reduced graph")]
    InvalidPartial,
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

/// Removal order of easy vertices for a target color count.
#[derive(Debug, Clone)]
pub struct EasyOrder {
    /// Vertex ids of the host graph, in removal order.
    pub order: Vec<u32>,
    /// Target color count used to produce the order.
    pub k: usize,
}

/// Result of stripping easy vertices: the induced subgraph on the remaining
/// vertices plus the id mapping back into the host graph.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub reduced: Graph,
    pub easy: EasyOrder,
    /// `kept[i]` is the host-graph id of reduced vertex `i` (ascending).
    pub kept: Vec<u32>,
}

/// Repeatedly removes any vertex with current degree <= k-1 (smallest id
/// first when several qualify), until none qualifies.
pub fn degeneracy_easy_vertices(g: &Graph, k: usize) -> Reduction {
    assert!(k >= 1, "target color count must be at least 1");
    let n = g.vertex_count();
    let mut degree: Vec<usize> = (0..n as u32).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut queue: BinaryHeap<Reverse<u32>> = (0..n as u32)
        .filter(|&v| degree[v as usize] <= k - 1)
        .map(Reverse)
        .collect();
    let mut order = Vec::new();

    while let Some(Reverse(v)) = queue.pop() {
        if removed[v as usize] {
            continue;
        }
        removed[v as usize] = true;
        order.push(v);
        for &u in g.neighbors(v) {
            if removed[u as usize] {
                continue;
            }
            degree[u as usize] -= 1;
            if degree[u as usize] == k - 1 {
                queue.push(Reverse(u));
            }
        }
    }

    let kept: Vec<u32> = (0..n as u32).filter(|&v| !removed[v as usize]).collect();
    let mut new_id = vec![u32::MAX; n];
    for (i, &v) in kept.iter().enumerate() {
        new_id[v as usize] = i as u32;
    }
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for &v in &kept {
        for &u in g.neighbors(v) {
            if u > v && !removed[u as usize] {
                edges.push((new_id[v as usize], new_id[u as usize]));
            }
        }
    }
    let reduced = build_graph(kept.len(), &edges).expect("induced subgraph is well formed");
    Reduction {
        reduced,
        easy: EasyOrder { order, k },
        kept,
    }
}

/// Extends a valid coloring of the reduced graph to the full graph by greedy
/// coloring the easy vertices from last removed to first. Never uses more
/// than `max(k, partial colors)` colors.
pub fn extend_coloring_to_easy(
    g: &Graph,
    partial: &Coloring,
    reduction: &Reduction,
) -> Result<Coloring, ExtendError> {
    let report = validate_coloring(&reduction.reduced, partial)?;
    if !report.valid {
        return Err(ExtendError::InvalidPartial);
    }
    let mut colors = vec![u32::MAX; g.vertex_count()];
    for (i, &orig) in reduction.kept.iter().enumerate() {
        colors[orig as usize] = partial.color(i as u32);
    }
    let mut num_colors = partial.num_colors();
    for &v in reduction.easy.order.iter().rev() {
        let mut forbidden = vec![false; num_colors + 1];
        for &u in g.neighbors(v) {
            let c = colors[u as usize];
            if c != u32::MAX && (c as usize) < forbidden.len() {
                forbidden[c as usize] = true;
            }
        }
        let c = forbidden.iter().position(|&f| !f).unwrap() as u32;
        colors[v as usize] = c;
        num_colors = num_colors.max(c as usize + 1);
    }
    Ok(Coloring::new(colors, num_colors)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_coloring;

    fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves as u32).map(|v| (0, v)).collect();
        build_graph(leaves + 1, &edges).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                edges.push((u, v));
            }
        }
        build_graph(n, &edges).unwrap()
    }

    #[test]
    fn star_is_fully_easy_at_k2() {
        let g = star(5);
        let r = degeneracy_easy_vertices(&g, 2);
        assert_eq!(r.easy.order.len(), 6);
        assert_eq!(r.reduced.vertex_count(), 0);
        // leaves qualify first; the center qualifies once its degree drops
        // to 1 and then goes before leaf 5 by the smallest-id rule
        assert_eq!(r.easy.order, vec![1, 2, 3, 4, 0, 5]);
    }

    #[test]
    fn k4_has_no_easy_vertices_at_k3() {
        let g = complete(4);
        let r = degeneracy_easy_vertices(&g, 3);
        assert!(r.easy.order.is_empty());
        assert_eq!(r.reduced.vertex_count(), 4);
        assert_eq!(r.reduced.edge_count(), 6);
    }

    #[test]
    fn star_extension_uses_two_colors() {
        let g = star(5);
        let r = degeneracy_easy_vertices(&g, 2);
        let empty = Coloring::new(vec![], 0).unwrap();
        let full = extend_coloring_to_easy(&g, &empty, &r).unwrap();
        assert!(validate_coloring(&g, &full).unwrap().valid);
        assert!(full.num_colors() <= 2);
    }

    #[test]
    fn extension_keeps_exact_k() {
        // C5 plus a pendant: at k=3 the pendant (and then everything) is easy
        // once degrees drop, so color what remains with exactly 3 colors.
        let g = build_graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5)]).unwrap();
        let r = degeneracy_easy_vertices(&g, 3);
        let partial = if r.reduced.vertex_count() == 0 {
            Coloring::new(vec![], 0).unwrap()
        } else {
            crate::init::greedy_sequential(
                &r.reduced,
                &(0..r.reduced.vertex_count() as u32).collect::<Vec<_>>(),
            )
            .unwrap()
        };
        let full = extend_coloring_to_easy(&g, &partial, &r).unwrap();
        assert!(validate_coloring(&g, &full).unwrap().valid);
        assert!(full.num_colors() <= 3);
    }

    #[test]
    fn invalid_partial_rejected() {
        let g = complete(3);
        let r = degeneracy_easy_vertices(&g, 1);
        assert_eq!(r.reduced.vertex_count(), 3);
        let bad = Coloring::new(vec![0, 0, 1], 2).unwrap();
        assert_eq!(
            extend_coloring_to_easy(&g, &bad, &r).unwrap_err(),
            ExtendError::InvalidPartial
        );
    }

    #[test]
    fn random_graph_extension_matches_oracle() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let n = 18usize;
            let mut edges = Vec::new();
            for u in 0..n as u32 {
                for v in u + 1..n as u32 {
                    if rng.random_bool(0.3) {
                        edges.push((u, v));
                    }
                }
            }
            let g = build_graph(n, &edges).unwrap();
            let chi = crate::exact::exact_chromatic_number(&g).unwrap();
            let r = degeneracy_easy_vertices(&g, chi);
            let partial = if r.reduced.vertex_count() == 0 {
                Coloring::new(vec![], 0).unwrap()
            } else {
                // a valid coloring of the reduced graph with as few colors as
                // the oracle allows
                let chi_red = crate::exact::exact_chromatic_number(&r.reduced).unwrap();
                let mut cols = vec![u32::MAX; r.reduced.vertex_count()];
                for k in chi_red..=r.reduced.vertex_count() {
                    if exact_coloring(&r.reduced, k, &mut cols) {
                        break;
                    }
                }
                Coloring::from_assignment(&cols)
            };
            let full = extend_coloring_to_easy(&g, &partial, &r).unwrap();
            assert!(validate_coloring(&g, &full).unwrap().valid);
            assert!(full.num_colors() <= chi.max(partial.num_colors()));
        }
    }

    // small helper: find any k-coloring by backtracking
    fn exact_coloring(g: &Graph, k: usize, out: &mut Vec<u32>) -> bool {
        fn rec(g: &Graph, v: u32, k: usize, colors: &mut Vec<u32>) -> bool {
            if v as usize == g.vertex_count() {
                return true;
            }
            for c in 0..k as u32 {
                if g.neighbors(v)
                    .iter()
                    .all(|&u| colors[u as usize] != c || u > v)
                {
                    colors[v as usize] = c;
                    if rec(g, v + 1, k, colors) {
                        return true;
                    }
                    colors[v as usize] = u32::MAX;
                }
            }
            false
        }
        out.iter_mut().for_each(|c| *c = u32::MAX);
        rec(g, 0, k, out)
    }

    #[test]
    fn removal_order_respects_degree_bound() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let n = 40;
            let mut edges = Vec::new();
            for u in 0..n as u32 {
                for v in u + 1..n as u32 {
                    if rng.random_bool(0.15) {
                        edges.push((u, v));
                    }
                }
            }
            let g = build_graph(n, &edges).unwrap();
            let k = rng.random_range(1..6usize);
            let r = degeneracy_easy_vertices(&g, k);
            // replay: when order[i] is removed it has <= k-1 not-yet-removed neighbors
            let mut gone = vec![false; n];
            for &v in &r.easy.order {
                let live = g.neighbors(v).iter().filter(|&&u| !gone[u as usize]).count();
                assert!(live <= k - 1, "vertex {v} had {live} live neighbors at k={k}");
                gone[v as usize] = true;
            }
            // and nothing left qualifies
            for v in 0..n as u32 {
                if !gone[v as usize] {
                    let live = g.neighbors(v).iter().filter(|&&u| !gone[u as usize]).count();
                    assert!(live > k - 1);
                }
            }
        }
    }
}
