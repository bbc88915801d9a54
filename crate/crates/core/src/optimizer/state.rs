//! Partial-coloring state: class assignments, the conflict set, and the
//! per-vertex uncoloring counters that drive the weight function.

use crate::graph::{Coloring, Graph};
use std::collections::VecDeque;

pub const UNCOLORED: u32 = u32::MAX;

/// A valid partial coloring plus the conflict set S of uncolored vertices.
///
/// Between optimizer iterations every vertex is either colored or in S, and
/// no two adjacent colored vertices share a class.
#[derive(Debug, Clone)]
pub struct PartialState {
    class_of: Vec<u32>,
    classes: Vec<Vec<u32>>,
    pos_in_class: Vec<u32>,
    conflict_set: VecDeque<u32>,
    in_conflict_set: Vec<bool>,
    q: Vec<u64>,
    pinned: Vec<bool>,
    colored_count: usize,
}

impl PartialState {
    /// Builds a fully colored state (empty conflict set) from a raw
    /// assignment with `num_classes` classes, some of which may be empty.
    pub fn from_assignment(colors: &[u32], num_classes: usize, pinned_vertices: &[u32]) -> Self {
        let n = colors.len();
        let mut classes = vec![Vec::new(); num_classes];
        let mut pos_in_class = vec![0u32; n];
        for (v, &c) in colors.iter().enumerate() {
            assert!((c as usize) < num_classes, "color out of range");
            pos_in_class[v] = classes[c as usize].len() as u32;
            classes[c as usize].push(v as u32);
        }
        let mut pinned = vec![false; n];
        for &v in pinned_vertices {
            pinned[v as usize] = true;
        }
        PartialState {
            class_of: colors.to_vec(),
            classes,
            pos_in_class,
            conflict_set: VecDeque::new(),
            in_conflict_set: vec![false; n],
            q: vec![0; n],
            pinned,
            colored_count: n,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.class_of.len()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    #[inline]
    pub fn class_of(&self, v: u32) -> u32 {
        self.class_of[v as usize]
    }

    pub fn class_members(&self, class: u32) -> &[u32] {
        &self.classes[class as usize]
    }

    pub fn class_size(&self, class: u32) -> usize {
        self.classes[class as usize].len()
    }

    #[inline]
    pub fn is_pinned(&self, v: u32) -> bool {
        self.pinned[v as usize]
    }

    #[inline]
    pub fn q(&self, v: u32) -> u64 {
        self.q[v as usize]
    }

    pub fn bump_q(&mut self, v: u32) -> u64 {
        self.q[v as usize] += 1;
        self.q[v as usize]
    }

    pub fn colored_count(&self) -> usize {
        self.colored_count
    }

    pub fn conflict_len(&self) -> usize {
        self.conflict_set.len()
    }

    pub fn conflict_set(&self) -> impl Iterator<Item = u32> + '_ {
        self.conflict_set.iter().copied()
    }

    pub fn in_conflict_set(&self, v: u32) -> bool {
        self.in_conflict_set[v as usize]
    }

    /// Class contains at least one pinned vertex.
    pub fn class_has_pinned(&self, class: u32) -> bool {
        self.classes[class as usize]
            .iter()
            .any(|&v| self.pinned[v as usize])
    }

    /// Moves every vertex of `class` into the conflict set (in class-list
    /// order) and removes the class, compacting higher class indices down.
    pub fn eliminate_class(&mut self, class: u32) {
        let members = std::mem::take(&mut self.classes[class as usize]);
        for &v in &members {
            self.class_of[v as usize] = UNCOLORED;
            self.push_conflict(v);
            self.colored_count -= 1;
        }
        self.classes.remove(class as usize);
        for c in class as usize..self.classes.len() {
            for &v in &self.classes[c] {
                self.class_of[v as usize] = c as u32;
            }
        }
    }

    /// Assigns an uncolored vertex to a class.
    pub fn assign(&mut self, v: u32, class: u32) {
        debug_assert_eq!(self.class_of[v as usize], UNCOLORED);
        debug_assert!(!self.in_conflict_set[v as usize]);
        let list = &mut self.classes[class as usize];
        self.pos_in_class[v as usize] = list.len() as u32;
        list.push(v);
        self.class_of[v as usize] = class;
        self.colored_count += 1;
    }

    /// Moves a vertex between classes (or assigns it if uncolored), without
    /// touching the conflict set or q. Returns the previous class.
    pub fn move_vertex(&mut self, v: u32, class: u32) -> u32 {
        let old = self.class_of[v as usize];
        if old != UNCOLORED {
            self.detach(v);
            self.class_of[v as usize] = UNCOLORED;
            self.colored_count -= 1;
        }
        self.assign(v, class);
        old
    }

    /// Uncolors a vertex and pushes it to the back of the conflict set.
    pub fn uncolor_to_conflict_set(&mut self, v: u32) {
        debug_assert_ne!(self.class_of[v as usize], UNCOLORED);
        self.detach(v);
        self.class_of[v as usize] = UNCOLORED;
        self.colored_count -= 1;
        self.push_conflict(v);
    }

    /// Makes a colored vertex uncolored without entering the conflict set
    /// (transactional rollback for BDFS).
    pub fn detach_to_uncolored(&mut self, v: u32) {
        debug_assert_ne!(self.class_of[v as usize], UNCOLORED);
        self.detach(v);
        self.class_of[v as usize] = UNCOLORED;
        self.colored_count -= 1;
    }

    fn detach(&mut self, v: u32) {
        let class = self.class_of[v as usize] as usize;
        let pos = self.pos_in_class[v as usize] as usize;
        let list = &mut self.classes[class];
        let last = *list.last().expect("class of v is non-empty");
        list.swap_remove(pos);
        if last != v {
            self.pos_in_class[last as usize] = pos as u32;
        }
    }

    fn push_conflict(&mut self, v: u32) {
        debug_assert!(!self.in_conflict_set[v as usize]);
        self.conflict_set.push_back(v);
        self.in_conflict_set[v as usize] = true;
    }

    /// Oldest element of the conflict set.
    pub fn pop_conflict_front(&mut self) -> Option<u32> {
        let v = self.conflict_set.pop_front()?;
        self.in_conflict_set[v as usize] = false;
        Some(v)
    }

    /// Removes the element at `idx` (order within S is irrelevant for the
    /// strategies that use this).
    pub fn pop_conflict_at(&mut self, idx: usize) -> u32 {
        let last = self.conflict_set.len() - 1;
        self.conflict_set.swap(idx, last);
        let v = self.conflict_set.pop_back().expect("non-empty");
        self.in_conflict_set[v as usize] = false;
        v
    }

    /// Finalizes a solved state (empty conflict set) into a compact coloring.
    pub fn to_coloring(&self) -> Coloring {
        assert!(
            self.conflict_set.is_empty(),
            "conflict set must be empty to finalize"
        );
        Coloring::from_assignment(&self.class_of)
    }

    /// Full validity and bookkeeping scan; test and paranoid use.
    pub fn check_consistency(&self, g: &Graph) {
        assert_eq!(self.colored_count + self.conflict_set.len(), g.vertex_count());
        for v in 0..g.vertex_count() as u32 {
            let c = self.class_of[v as usize];
            if c == UNCOLORED {
                assert!(self.in_conflict_set[v as usize], "vertex {v} lost");
            } else {
                assert_eq!(self.classes[c as usize][self.pos_in_class[v as usize] as usize], v);
                for &u in g.neighbors(v) {
                    assert_ne!(
                        self.class_of[u as usize], c,
                        "monochromatic edge ({u},{v}) in class {c}"
                    );
                }
            }
        }
    }
}
