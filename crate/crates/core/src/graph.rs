//! Compressed sparse adjacency graph and coloring primitives.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(u32),
    #[error("vertex id {id} out of range (vertex count {vertex_count})")]
    VertexOutOfRange { id: u32, vertex_count: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("coloring has {got} entries, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("vertex {vertex} has color {color}, but num_colors is {num_colors}")]
    ColorOutOfRange {
        vertex: u32,
        color: u32,
        num_colors: usize,
    },
    #[error("color class {0} is empty")]
    EmptyClass(u32),
}

/// Immutable undirected graph in compressed sparse row form.
///
/// Neighbor lists are sorted and duplicate-free; the structure is symmetric
/// and contains no self-loops. Construction goes through [`build_graph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    edge_count: usize,
}

impl Graph {
    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn degree(&self, v: u32) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.neighbors[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count())
            .map(|v| self.degree(v as u32))
            .max()
            .unwrap_or(0)
    }

    /// All edges as (u, v) pairs with u < v, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.vertex_count() as u32).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }
}

/// Builds a graph from an edge list. Duplicate edges are collapsed,
/// self-loops and out-of-range ids are rejected.
pub fn build_graph(vertex_count: usize, edges: &[(u32, u32)]) -> Result<Graph, GraphError> {
    let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); vertex_count];
    for &(u, v) in edges {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        for id in [u, v] {
            if id as usize >= vertex_count {
                return Err(GraphError::VertexOutOfRange { id, vertex_count });
            }
        }
        adjacency[u as usize].push(v);
        adjacency[v as usize].push(u);
    }
    let mut offsets = Vec::with_capacity(vertex_count + 1);
    let mut neighbors = Vec::new();
    offsets.push(0);
    for list in &mut adjacency {
        list.sort_unstable();
        list.dedup();
        neighbors.extend_from_slice(list);
        offsets.push(neighbors.len());
    }
    let edge_count = neighbors.len() / 2;
    Ok(Graph {
        offsets,
        neighbors,
        edge_count,
    })
}

/// Assignment of a color class index to every vertex, with no empty classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<u32>,
    num_colors: usize,
}

impl Coloring {
    /// Wraps a dense assignment: every color is below `num_colors` and every
    /// class in `[0, num_colors)` is non-empty.
    pub fn new(colors: Vec<u32>, num_colors: usize) -> Result<Self, ColoringError> {
        let mut used = vec![false; num_colors];
        for (v, &c) in colors.iter().enumerate() {
            if c as usize >= num_colors {
                return Err(ColoringError::ColorOutOfRange {
                    vertex: v as u32,
                    color: c,
                    num_colors,
                });
            }
            used[c as usize] = true;
        }
        if let Some(class) = used.iter().position(|&u| !u) {
            return Err(ColoringError::EmptyClass(class as u32));
        }
        Ok(Coloring { colors, num_colors })
    }

    /// Compacts an arbitrary assignment into a dense coloring, remapping the
    /// used color indices onto `0..k` in ascending order.
    pub fn from_assignment(colors: &[u32]) -> Self {
        let max = colors.iter().copied().max().map_or(0, |m| m as usize + 1);
        let mut used = vec![false; max];
        for &c in colors {
            used[c as usize] = true;
        }
        let mut remap = vec![u32::MAX; max];
        let mut next = 0u32;
        for (old, &u) in used.iter().enumerate() {
            if u {
                remap[old] = next;
                next += 1;
            }
        }
        Coloring {
            colors: colors.iter().map(|&c| remap[c as usize]).collect(),
            num_colors: next as usize,
        }
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    #[inline]
    pub fn color(&self, v: u32) -> u32 {
        self.colors[v as usize]
    }

    pub fn into_colors(self) -> Vec<u32> {
        self.colors
    }
}

/// Outcome of a coloring validation: the exact list of monochromatic edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityReport {
    pub valid: bool,
    pub conflict_edges: Vec<(u32, u32)>,
}

/// Checks a coloring against a graph in one pass over the edges.
pub fn validate_coloring(g: &Graph, c: &Coloring) -> Result<ValidityReport, ColoringError> {
    validate_assignment(g, c.colors(), c.num_colors())
}

/// Same as [`validate_coloring`] but for raw assignments, e.g. solution files
/// that have not been through [`Coloring::new`].
pub fn validate_assignment(
    g: &Graph,
    colors: &[u32],
    num_colors: usize,
) -> Result<ValidityReport, ColoringError> {
    if colors.len() != g.vertex_count() {
        return Err(ColoringError::LengthMismatch {
            expected: g.vertex_count(),
            got: colors.len(),
        });
    }
    for (v, &c) in colors.iter().enumerate() {
        if c as usize >= num_colors {
            return Err(ColoringError::ColorOutOfRange {
                vertex: v as u32,
                color: c,
                num_colors,
            });
        }
    }
    let mut conflict_edges = Vec::new();
    for (u, v) in g.edges() {
        if colors[u as usize] == colors[v as usize] {
            conflict_edges.push((u, v));
        }
    }
    Ok(ValidityReport {
        valid: conflict_edges.is_empty(),
        conflict_edges,
    })
}
