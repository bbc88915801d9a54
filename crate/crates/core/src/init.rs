//! Initial colorings: sequential greedy, Welsh-Powell ordering, DSATUR, RLF,
//! and the orientation greedy that sorts segments by slope.
//!
//! All tie-breaks go to the smallest vertex id so every initializer is
//! deterministic.

use crate::geometry::{segment_angle, Instance};
use crate::graph::{Coloring, Graph};
use std::cmp::Reverse;
use std::collections::BinaryHeap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InitError {
    #[error("order is not a permutation of the vertex set")]
    NotAPermutation,
    #[error("instance has {segments} segments but graph has {vertices} vertices")]
    IndexMismatch { segments: usize, vertices: usize },
}

/// Colors vertices in the given order, assigning each the smallest color
/// absent from its already-colored neighbors.
pub fn greedy_sequential(g: &Graph, order: &[u32]) -> Result<Coloring, InitError> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(InitError::NotAPermutation);
    }
    for &v in order {
        if (v as usize) >= n || seen[v as usize] {
            return Err(InitError::NotAPermutation);
        }
        seen[v as usize] = true;
    }

    let mut colors = vec![u32::MAX; n];
    let mut num_colors = 0usize;
    let mut forbidden = vec![u64::MAX; 0];
    for &v in order {
        forbidden.clear();
        forbidden.resize(num_colors + 1, 0);
        for &u in g.neighbors(v) {
            let c = colors[u as usize];
            if c != u32::MAX {
                forbidden[c as usize / 64] |= 1 << (c % 64);
            }
        }
        let c = smallest_clear_bit(&forbidden);
        colors[v as usize] = c;
        num_colors = num_colors.max(c as usize + 1);
    }
    Ok(Coloring::new(colors, num_colors).expect("greedy colorings are dense"))
}

fn smallest_clear_bit(words: &[u64]) -> u32 {
    for (i, &w) in words.iter().enumerate() {
        if w != u64::MAX {
            return i as u32 * 64 + w.trailing_ones();
        }
    }
    words.len() as u32 * 64
}

/// Vertices in decreasing degree order, ties by increasing id.
pub fn welsh_powell_order(g: &Graph) -> Vec<u32> {
    let mut order: Vec<u32> = (0..g.vertex_count() as u32).collect();
    order.sort_by_key(|&v| (Reverse(g.degree(v)), v));
    order
}

/// DSATUR: always color the vertex with the most distinct neighbor colors,
/// ties by maximum degree, then smallest id.
pub fn dsatur(g: &Graph) -> Coloring {
    let n = g.vertex_count();
    let mut colors = vec![u32::MAX; n];
    let mut num_colors = 0usize;
    let mut sat_bits: Vec<Vec<u64>> = vec![Vec::new(); n];
    let mut sat: Vec<u32> = vec![0; n];
    let mut colored = vec![false; n];

    // lazy max-heap keyed by (saturation, degree, smallest id); stale
    // entries are skipped on pop
    let mut heap: BinaryHeap<(u32, usize, Reverse<u32>)> = (0..n as u32)
        .map(|v| (0, g.degree(v), Reverse(v)))
        .collect();

    let mut forbidden: Vec<u64> = Vec::new();
    while let Some((s, _, Reverse(v))) = heap.pop() {
        if colored[v as usize] || s != sat[v as usize] {
            continue;
        }
        forbidden.clear();
        forbidden.resize(num_colors / 64 + 1, 0);
        for &u in g.neighbors(v) {
            let c = colors[u as usize];
            if c != u32::MAX {
                forbidden[c as usize / 64] |= 1 << (c % 64);
            }
        }
        let c = smallest_clear_bit(&forbidden);
        colors[v as usize] = c;
        colored[v as usize] = true;
        num_colors = num_colors.max(c as usize + 1);

        let word = c as usize / 64;
        let bit = 1u64 << (c % 64);
        for &u in g.neighbors(v) {
            if colored[u as usize] {
                continue;
            }
            let bits = &mut sat_bits[u as usize];
            if bits.len() <= word {
                bits.resize(word + 1, 0);
            }
            if bits[word] & bit == 0 {
                bits[word] |= bit;
                sat[u as usize] += 1;
                heap.push((sat[u as usize], g.degree(u), Reverse(u)));
            }
        }
    }
    if n == 0 {
        return Coloring::new(vec![], 0).expect("empty");
    }
    Coloring::new(colors, num_colors).expect("dsatur colorings are dense")
}

const OUT: u8 = 0; // colored earlier, or already in the current class
const CANDIDATE: u8 = 1; // still placeable in the current class
const FORBIDDEN: u8 = 2; // adjacent to the current class

/// Recursive largest first: peel off one large independent set per color.
/// Seeds with the max-degree vertex of the residual graph; grows by the
/// candidate with the most neighbors in the forbidden set, ties by id.
pub fn rlf(g: &Graph) -> Coloring {
    let n = g.vertex_count();
    let mut colors = vec![u32::MAX; n];
    let mut residual: Vec<bool> = vec![true; n];
    let mut remaining = n;
    let mut color = 0u32;

    let mut status = vec![OUT; n];
    let mut toward_forbidden = vec![0u32; n];

    while remaining > 0 {
        // seed: max residual degree, ties smallest id
        let seed = (0..n as u32)
            .filter(|&v| residual[v as usize])
            .max_by_key(|&v| {
                let deg = g
                    .neighbors(v)
                    .iter()
                    .filter(|&&u| residual[u as usize])
                    .count();
                (deg, Reverse(v))
            })
            .expect("residual graph is non-empty");

        for v in 0..n {
            status[v] = if residual[v] { CANDIDATE } else { OUT };
            toward_forbidden[v] = 0;
        }

        let mut class = vec![seed];
        add_to_class(g, seed, &mut status, &mut toward_forbidden);
        loop {
            let next = (0..n as u32)
                .filter(|&v| status[v as usize] == CANDIDATE)
                .max_by_key(|&v| (toward_forbidden[v as usize], Reverse(v)));
            match next {
                Some(v) => {
                    class.push(v);
                    add_to_class(g, v, &mut status, &mut toward_forbidden);
                }
                None => break,
            }
        }

        for &v in &class {
            colors[v as usize] = color;
            residual[v as usize] = false;
            remaining -= 1;
        }
        color += 1;
    }
    Coloring::new(colors, color as usize).expect("rlf colorings are dense")
}

fn add_to_class(g: &Graph, v: u32, status: &mut [u8], toward_forbidden: &mut [u32]) {
    status[v as usize] = OUT;
    for &u in g.neighbors(v) {
        if status[u as usize] == CANDIDATE {
            // candidate becomes forbidden; its candidate neighbors now have
            // one more neighbor in the forbidden set
            status[u as usize] = FORBIDDEN;
            for &w in g.neighbors(u) {
                if status[w as usize] == CANDIDATE {
                    toward_forbidden[w as usize] += 1;
                }
            }
        }
    }
}

/// Greedy over segments sorted by supporting-line angle, so near-parallel
/// segments (which rarely cross) are grouped early.
pub fn orientation_greedy(inst: &Instance, g: &Graph) -> Result<Coloring, InitError> {
    if inst.segment_count() != g.vertex_count() {
        return Err(InitError::IndexMismatch {
            segments: inst.segment_count(),
            vertices: g.vertex_count(),
        });
    }
    let mut order: Vec<u32> = (0..g.vertex_count() as u32).collect();
    let angles: Vec<f64> = (0..inst.segment_count())
        .map(|i| segment_angle(inst.segment(i)))
        .collect();
    order.sort_by(|&a, &b| {
        angles[a as usize]
            .partial_cmp(&angles[b as usize])
            .expect("angles are finite")
            .then(a.cmp(&b))
    });
    greedy_sequential(g, &order)
}
