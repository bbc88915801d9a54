//! Exact predicates over integer segments and conflict graph construction.
//!
//! Two segments conflict ("cross") when they share any point other than
//! exactly one common endpoint of both. All crossing decisions are made with
//! exact integer arithmetic; floats appear only in the angle sort key.

use crate::graph::{build_graph, Graph};
use rayon::prelude::*;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("segment {0} is degenerate (zero length)")]
    DegenerateSegment(usize),
    #[error("segment {segment} references point {point} out of range")]
    PointOutOfRange { segment: usize, point: u32 },
}

/// Exact integer point. Coordinates are stored as given; predicates widen to
/// 128 bits so anything representable in i64 is safe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }
}

/// A geometric input: points and the index pairs forming segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub id: String,
    pub points: Vec<Point>,
    pub segments: Vec<(u32, u32)>,
}

impl Instance {
    pub fn segment(&self, i: usize) -> Segment {
        let (a, b) = self.segments[i];
        Segment::new(self.points[a as usize], self.points[b as usize])
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    /// Bounds and degeneracy checks over all segments.
    pub fn validate(&self) -> Result<(), GeometryError> {
        for (i, &(a, b)) in self.segments.iter().enumerate() {
            for id in [a, b] {
                if id as usize >= self.points.len() {
                    return Err(GeometryError::PointOutOfRange {
                        segment: i,
                        point: id,
                    });
                }
            }
            if self.points[a as usize] == self.points[b as usize] {
                return Err(GeometryError::DegenerateSegment(i));
            }
        }
        Ok(())
    }
}

/// Sign of the cross product (q-p) x (r-p): +1 left turn, -1 right turn,
/// 0 collinear. Exact for the full i64 coordinate range.
pub fn orientation(p: Point, q: Point, r: Point) -> i8 {
    let det = (q.x as i128 - p.x as i128) * (r.y as i128 - p.y as i128)
        - (q.y as i128 - p.y as i128) * (r.x as i128 - p.x as i128);
    match det.cmp(&0) {
        std::cmp::Ordering::Greater => 1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Less => -1,
    }
}

fn bbox_contains(s: Segment, p: Point) -> bool {
    s.a.x.min(s.b.x) <= p.x
        && p.x <= s.a.x.max(s.b.x)
        && s.a.y.min(s.b.y) <= p.y
        && p.y <= s.a.y.max(s.b.y)
}

fn bboxes_overlap(s: Segment, t: Segment) -> bool {
    s.a.x.min(s.b.x) <= t.a.x.max(t.b.x)
        && t.a.x.min(t.b.x) <= s.a.x.max(s.b.x)
        && s.a.y.min(s.b.y) <= t.a.y.max(t.b.y)
        && t.a.y.min(t.b.y) <= s.a.y.max(s.b.y)
}

/// Positive-length overlap of two collinear segments, decided on the
/// dominant axis of the shared supporting line.
fn collinear_overlap_positive(s: Segment, t: Segment) -> bool {
    let (s0, s1, t0, t1) = if s.a.x != s.b.x {
        (
            s.a.x.min(s.b.x),
            s.a.x.max(s.b.x),
            t.a.x.min(t.b.x),
            t.a.x.max(t.b.x),
        )
    } else {
        (
            s.a.y.min(s.b.y),
            s.a.y.max(s.b.y),
            t.a.y.min(t.b.y),
            t.a.y.max(t.b.y),
        )
    };
    s0.max(t0) < s1.min(t1)
}

/// True iff the segments share any point other than exactly one common
/// endpoint of both: proper crossings, endpoint-in-interior touches, and
/// collinear overlaps of positive length all count.
pub fn segments_cross(s: Segment, t: Segment) -> bool {
    debug_assert!(s.a != s.b && t.a != t.b, "degenerate segment");
    if !bboxes_overlap(s, t) {
        return false;
    }
    let o1 = orientation(s.a, s.b, t.a);
    let o2 = orientation(s.a, s.b, t.b);
    let o3 = orientation(t.a, t.b, s.a);
    let o4 = orientation(t.a, t.b, s.b);

    let proper = o1 * o2 < 0 && o3 * o4 < 0;
    let touch = (o1 == 0 && bbox_contains(s, t.a))
        || (o2 == 0 && bbox_contains(s, t.b))
        || (o3 == 0 && bbox_contains(t, s.a))
        || (o4 == 0 && bbox_contains(t, s.b));
    if !proper && !touch {
        return false;
    }

    let shared = [s.a == t.a, s.a == t.b, s.b == t.a, s.b == t.b]
        .iter()
        .filter(|&&x| x)
        .count();
    match shared {
        0 => true,
        // both endpoints shared: identical (possibly reversed) segments
        2 => true,
        _ => {
            let collinear = o1 == 0 && o2 == 0;
            // distinct supporting lines meet only at the shared endpoint
            collinear && collinear_overlap_positive(s, t)
        }
    }
}

/// Angle of the undirected supporting line, folded into [-pi/2, pi/2).
/// A float sort key only; never used in crossing decisions.
pub fn segment_angle(s: Segment) -> f64 {
    let dx = (s.b.x - s.a.x) as f64;
    let dy = (s.b.y - s.a.y) as f64;
    let mut angle = dy.atan2(dx);
    if angle >= std::f64::consts::FRAC_PI_2 {
        angle -= std::f64::consts::PI;
    } else if angle < -std::f64::consts::FRAC_PI_2 {
        angle += std::f64::consts::PI;
    }
    angle
}

/// Builds the intersection conflict graph: one vertex per segment, one edge
/// per crossing pair. Candidate pairs come from a uniform grid over bounding
/// boxes; the edge set is identical to the naive all-pairs scan.
pub fn build_conflict_graph(inst: &Instance) -> Result<Graph, GeometryError> {
    inst.validate()?;
    let n = inst.segment_count();
    if n < 2 {
        return Ok(build_graph(n, &[]).expect("empty edge list"));
    }

    let boxes: Vec<(i64, i64, i64, i64)> = (0..n)
        .map(|i| {
            let s = inst.segment(i);
            (
                s.a.x.min(s.b.x),
                s.a.y.min(s.b.y),
                s.a.x.max(s.b.x),
                s.a.y.max(s.b.y),
            )
        })
        .collect();

    // Cell size tracks the average bounding-box extent, clamped to >= 1.
    let sum_w: i128 = boxes.iter().map(|b| (b.2 - b.0) as i128).sum();
    let sum_h: i128 = boxes.iter().map(|b| (b.3 - b.1) as i128).sum();
    let cell = ((sum_w + sum_h) / (2 * n as i128)).max(1) as i64;

    let mut buckets: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
    for (i, b) in boxes.iter().enumerate() {
        for cx in b.0.div_euclid(cell)..=b.2.div_euclid(cell) {
            for cy in b.1.div_euclid(cell)..=b.3.div_euclid(cell) {
                buckets.entry((cx, cy)).or_default().push(i as u32);
            }
        }
    }

    let cells: Vec<(&(i64, i64), &Vec<u32>)> = buckets.iter().collect();
    let edges: Vec<(u32, u32)> = cells
        .par_iter()
        .flat_map_iter(|&(&(cx, cy), members)| {
            let boxes = &boxes;
            let inst = &*inst;
            members.iter().enumerate().flat_map(move |(pos, &i)| {
                members[pos + 1..].iter().filter_map(move |&j| {
                    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
                    let bi = &boxes[lo as usize];
                    let bj = &boxes[hi as usize];
                    // each candidate pair is tested once, in the cell holding
                    // the min corner of the bbox overlap
                    let ox = bi.0.max(bj.0).div_euclid(cell);
                    let oy = bi.1.max(bj.1).div_euclid(cell);
                    if (ox, oy) != (cx, cy) {
                        return None;
                    }
                    segments_cross(inst.segment(lo as usize), inst.segment(hi as usize))
                        .then_some((lo, hi))
                })
            })
        })
        .collect();

    Ok(build_graph(n, &edges).expect("segment indices are in range"))
}

/// The quadratic all-pairs construction, kept as the reference path.
pub fn build_conflict_graph_naive(inst: &Instance) -> Result<Graph, GeometryError> {
    inst.validate()?;
    let n = inst.segment_count();
    let edges: Vec<(u32, u32)> = (0..n as u32)
        .into_par_iter()
        .flat_map_iter(|i| {
            let inst = &*inst;
            (i + 1..n as u32).filter_map(move |j| {
                segments_cross(inst.segment(i as usize), inst.segment(j as usize))
                    .then_some((i, j))
            })
        })
        .collect();
    Ok(build_graph(n, &edges).expect("segment indices are in range"))
}
