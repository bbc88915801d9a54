//! Graph coloring by conflict optimization, with an exact-geometry front end
//! that turns CG:SHOP-style line-segment instances into intersection
//! conflict graphs.
//!
//! The pipeline: parse an instance ([`io`]), build the conflict graph
//! ([`geometry`]), compute an initial coloring ([`init`]), then drive the
//! color count down with the conflict optimizer ([`optimizer`]), optionally
//! pinning a heuristic clique ([`clique`]) and stripping easy vertices
//! ([`reduce`]).

pub mod clique;
pub mod exact;
pub mod geometry;
pub mod graph;
pub mod init;
pub mod io;
pub mod optimizer;
pub mod reduce;
