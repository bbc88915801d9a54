//! File formats: DIMACS edge lists, CG:SHOP instance and solution JSON, and
//! clique files (one vertex id per line).
//!
//! The concrete JSON field layout follows the public CG:SHOP 2022
//! convention and is isolated here so it can be swapped.

use crate::geometry::{build_conflict_graph, GeometryError, Instance, Point};
use crate::graph::{build_graph, validate_coloring, Coloring, ColoringError, Graph, GraphError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("missing 'p edge <n> <m>' header line")]
    MissingHeader,
    #[error("line {line}: vertex {id} out of range 1..={max}")]
    VertexOutOfRange { line: usize, id: i64, max: usize },
    #[error("invalid json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Error)]
pub enum SolutionError {
    #[error("coloring has {conflicts} conflicting segment pairs")]
    InvalidColoring { conflicts: usize },
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Parses DIMACS edge format: `c` comments, one `p edge <n> <m>` header,
/// `e <u> <v>` lines with 1-indexed vertices. Duplicate edges collapse.
pub fn parse_dimacs(text: &str) -> Result<Graph, ParseError> {
    let mut vertex_count: Option<usize> = None;
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('c') {
            continue;
        }
        let mut tok = l.split_whitespace();
        match tok.next() {
            Some("p") => {
                if vertex_count.is_some() {
                    return Err(ParseError::Malformed {
                        line,
                        message: "duplicate p line".into(),
                    });
                }
                if tok.next() != Some("edge") {
                    return Err(ParseError::Malformed {
                        line,
                        message: "expected 'p edge <n> <m>'".into(),
                    });
                }
                let n: usize = tok
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or(ParseError::Malformed {
                        line,
                        message: "bad vertex count".into(),
                    })?;
                let _m: usize = tok
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or(ParseError::Malformed {
                        line,
                        message: "bad edge count".into(),
                    })?;
                vertex_count = Some(n);
            }
            Some("e") => {
                let n = vertex_count.ok_or(ParseError::MissingHeader)?;
                let mut next_id = || -> Result<i64, ParseError> {
                    tok.next()
                        .and_then(|t| t.parse().ok())
                        .ok_or(ParseError::Malformed {
                            line,
                            message: "expected 'e <u> <v>'".into(),
                        })
                };
                let u = next_id()?;
                let v = next_id()?;
                for id in [u, v] {
                    if id < 1 || id as usize > n {
                        return Err(ParseError::VertexOutOfRange { line, id, max: n });
                    }
                }
                if u == v {
                    return Err(ParseError::Malformed {
                        line,
                        message: format!("self-loop on vertex {u}"),
                    });
                }
                edges.push((u as u32 - 1, v as u32 - 1));
            }
            Some(other) => {
                return Err(ParseError::Malformed {
                    line,
                    message: format!("unknown record '{other}'"),
                })
            }
            None => unreachable!("blank lines are skipped"),
        }
    }
    let n = vertex_count.ok_or(ParseError::MissingHeader)?;
    Ok(build_graph(n, &edges)?)
}

/// Writes a graph in the same DIMACS edge format (1-indexed, u < v).
pub fn write_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

fn int_array(obj: &serde_json::Map<String, serde_json::Value>, key: &str) -> Result<Vec<i64>, ParseError> {
    let arr = obj
        .get(key)
        .and_then(|v| v.as_array())
        .ok_or_else(|| ParseError::Schema(format!("missing array field '{key}'")))?;
    arr.iter()
        .map(|v| {
            v.as_i64()
                .ok_or_else(|| ParseError::Schema(format!("non-integer value in '{key}'")))
        })
        .collect()
}

/// Parses a CG:SHOP 2022 instance: exact integer point arrays `x`/`y` and
/// segment endpoint index arrays `edge_i`/`edge_j`. Unknown fields are
/// ignored.
pub fn parse_cgshop_instance(text: &str) -> Result<Instance, ParseError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let obj = value
        .as_object()
        .ok_or_else(|| ParseError::Schema("top-level JSON object expected".into()))?;
    match obj.get("type").and_then(|t| t.as_str()) {
        Some("Instance_CGSHOP2022") => {}
        other => {
            return Err(ParseError::Schema(format!(
                "type must be 'Instance_CGSHOP2022', got {other:?}"
            )))
        }
    }
    let id = obj
        .get("id")
        .and_then(|v| v.as_str())
        .ok_or_else(|| ParseError::Schema("missing string field 'id'".into()))?
        .to_string();
    let xs = int_array(obj, "x")?;
    let ys = int_array(obj, "y")?;
    if xs.len() != ys.len() {
        return Err(ParseError::Schema(format!(
            "x has {} entries but y has {}",
            xs.len(),
            ys.len()
        )));
    }
    let ei = int_array(obj, "edge_i")?;
    let ej = int_array(obj, "edge_j")?;
    if ei.len() != ej.len() {
        return Err(ParseError::Schema(format!(
            "edge_i has {} entries but edge_j has {}",
            ei.len(),
            ej.len()
        )));
    }
    let points: Vec<Point> = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| Point::new(x, y))
        .collect();
    let segments: Vec<(u32, u32)> = ei
        .iter()
        .zip(&ej)
        .map(|(&a, &b)| {
            for id in [a, b] {
                if id < 0 || id as usize >= points.len() {
                    return Err(ParseError::Schema(format!(
                        "segment endpoint index {id} out of range"
                    )));
                }
            }
            Ok((a as u32, b as u32))
        })
        .collect::<Result<_, _>>()?;
    let inst = Instance {
        id,
        points,
        segments,
    };
    inst.validate()?;
    Ok(inst)
}

/// The challenge solution payload, in segment order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    #[serde(rename = "type")]
    pub kind: String,
    pub instance: String,
    pub num_colors: usize,
    pub colors: Vec<u32>,
}

pub const SOLUTION_KIND_CGSHOP: &str = "Solution_CGSHOP2022";
pub const SOLUTION_KIND_GRAPH: &str = "Solution_Coloring";

/// Serializes a coloring of the instance's conflict graph. The coloring is
/// re-validated against the instance; invalid colorings are refused.
pub fn write_solution(inst: &Instance, c: &Coloring) -> Result<String, SolutionError> {
    let g = build_conflict_graph(inst)?;
    write_graph_solution(&g, SOLUTION_KIND_CGSHOP, &inst.id, c)
}

/// Solution writer for plain graphs (DIMACS inputs); same record layout.
pub fn write_graph_solution(
    g: &Graph,
    kind: &str,
    name: &str,
    c: &Coloring,
) -> Result<String, SolutionError> {
    let report = validate_coloring(g, c)?;
    if !report.valid {
        return Err(SolutionError::InvalidColoring {
            conflicts: report.conflict_edges.len(),
        });
    }
    let record = SolutionRecord {
        kind: kind.to_string(),
        instance: name.to_string(),
        num_colors: c.num_colors(),
        colors: c.colors().to_vec(),
    };
    Ok(serde_json::to_string(&record).expect("record serializes"))
}

pub fn parse_solution(text: &str) -> Result<SolutionRecord, ParseError> {
    let record: SolutionRecord = serde_json::from_str(text)?;
    if record.kind != SOLUTION_KIND_CGSHOP && record.kind != SOLUTION_KIND_GRAPH {
        return Err(ParseError::Schema(format!(
            "unknown solution type '{}'",
            record.kind
        )));
    }
    Ok(record)
}

/// Clique file: one vertex id per line; blank lines ignored.
pub fn parse_clique_file(text: &str) -> Result<Vec<u32>, ParseError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let l = raw.trim();
        if l.is_empty() {
            continue;
        }
        let id: u32 = l.parse().map_err(|_| ParseError::Malformed {
            line: idx + 1,
            message: format!("expected a vertex id, got '{l}'"),
        })?;
        out.push(id);
    }
    Ok(out)
}

pub fn write_clique_file(vertices: &[u32]) -> String {
    let mut out = String::new();
    for &v in vertices {
        out.push_str(&format!("{v}\n"));
    }
    out
}
