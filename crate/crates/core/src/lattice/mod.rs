//! Finite multigraphs, lattice boxes and graph minors.

mod boxes;
mod graph;

pub use boxes::{rect_grid, BoxShape, LatticeBox, LatticeCoord, DEFAULT_VERTEX_BUDGET};
pub use graph::{EdgeId, MinorMap, MultiGraph, VertexId};

/// Complete graph on `n` vertices, edges in lexicographic order.
pub fn complete_graph(n: u32) -> MultiGraph {
    let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
    MultiGraph::from_edges(n as usize, edges).expect("valid vertex ids")
}

/// Cycle on `n >= 2` vertices; edge `i` joins `i` and `i + 1 mod n`.
pub fn cycle_graph(n: u32) -> MultiGraph {
    MultiGraph::from_edges(n as usize, (0..n).map(|i| (i, (i + 1) % n))).expect("valid vertex ids")
}

/// Path on `n` vertices.
pub fn path_graph(n: u32) -> MultiGraph {
    MultiGraph::from_edges(n as usize, (1..n).map(|i| (i - 1, i))).expect("valid vertex ids")
}
