use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense index into a graph's vertex table.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

/// Dense index into a graph's edge table. Parallel edges get distinct ids.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// Finite multigraph without self-loops.
///
/// Values are immutable once built: minors return a new graph together with the
/// [`MinorMap`] relating it to its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGraph {
    vertex_count: usize,
    edges: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
    connected: bool,
}

impl MultiGraph {
    /// Builds a graph from an edge list. Edges whose endpoints coincide are dropped, so the
    /// surviving edges are renumbered densely in input order.
    pub fn from_edges(vertex_count: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut kept = Vec::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v as usize >= vertex_count {
                    return Err(Error::UnknownVertex(VertexId(v)));
                }
            }
            if a != b {
                kept.push((VertexId(a), VertexId(b)));
            }
        }
        Ok(Self::from_checked(vertex_count, kept))
    }

    pub(crate) fn from_checked(vertex_count: usize, edges: Vec<(VertexId, VertexId)>) -> Self {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (i, &(a, b)) in edges.iter().enumerate() {
            debug_assert_ne!(a, b);
            let e = EdgeId(i as u32);
            adjacency[a.index()].push((b, e));
            adjacency[b.index()].push((a, e));
        }
        let connected = components(vertex_count, &adjacency).1 <= 1;
        MultiGraph {
            vertex_count,
            edges,
            adjacency,
            connected,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl DoubleEndedIterator<Item = VertexId> + ExactSizeIterator + '_ {
        (0..self.vertex_count as u32).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl DoubleEndedIterator<Item = EdgeId> + ExactSizeIterator + '_ {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> Result<(VertexId, VertexId)> {
        self.edges.get(e.index()).copied().ok_or(Error::UnknownEdge(e))
    }

    /// Incident `(neighbor, edge)` slots; parallel edges appear once each.
    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[v.index()]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v.index()].len()
    }

    /// Number of parallel edges joining `a` and `b`.
    pub fn multiplicity(&self, a: VertexId, b: VertexId) -> usize {
        self.adjacency[a.index()].iter().filter(|(w, _)| *w == b).count()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.index() < self.vertex_count
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if self.contains_vertex(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    /// True iff the graph has exactly one component. A single vertex is connected; so is the
    /// empty graph by convention.
    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// Component label per vertex and the number of components.
    pub fn components(&self) -> (Vec<u32>, usize) {
        components(self.vertex_count, &self.adjacency)
    }

    /// True if removing `e` disconnects its endpoints.
    pub fn is_bridge(&self, e: EdgeId) -> Result<bool> {
        let (a, b) = self.endpoints(e)?;
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![a];
        seen[a.index()] = true;
        while let Some(u) = stack.pop() {
            for &(w, f) in self.neighbors(u) {
                if f != e && !seen[w.index()] {
                    if w == b {
                        return Ok(false);
                    }
                    seen[w.index()] = true;
                    stack.push(w);
                }
            }
        }
        Ok(true)
    }

    /// Identifies the endpoints of `e`. The merged vertex keeps the smaller id, later
    /// vertices shift down by one, and edges that become loops (`e` and its parallels) vanish.
    pub fn contract(&self, e: EdgeId) -> Result<(MultiGraph, MinorMap)> {
        let (a, b) = self.endpoints(e)?;
        let (keep, gone) = if a < b { (a, b) } else { (b, a) };
        let class: Vec<u32> = (0..self.vertex_count as u32)
            .map(|v| if v == gone.0 { keep.0 } else { v })
            .collect();
        Ok(self.identify(&class))
    }

    /// Removes `e`; the vertex set is unchanged and later edges shift down by one.
    pub fn delete(&self, e: EdgeId) -> Result<(MultiGraph, MinorMap)> {
        self.endpoints(e)?;
        let mut edges = Vec::with_capacity(self.edges.len() - 1);
        let mut edge_map = Vec::with_capacity(self.edges.len());
        for (i, &ends) in self.edges.iter().enumerate() {
            if i == e.index() {
                edge_map.push(None);
            } else {
                edge_map.push(Some(EdgeId(edges.len() as u32)));
                edges.push(ends);
            }
        }
        let map = MinorMap {
            vertex_map: self.vertices().collect(),
            edge_map,
        };
        Ok((MultiGraph::from_checked(self.vertex_count, edges), map))
    }

    /// Quotient by a vertex partition. `class[v]` is any vertex label shared by everything
    /// identified with `v`; each class is renumbered to the rank of its smallest member.
    /// Edges inside a class become loops and are discarded.
    pub fn identify(&self, class: &[u32]) -> (MultiGraph, MinorMap) {
        assert_eq!(class.len(), self.vertex_count);
        let mut rep = vec![u32::MAX; self.vertex_count];
        for (v, &c) in class.iter().enumerate() {
            let r = &mut rep[c as usize];
            *r = (*r).min(v as u32);
        }
        // class representative -> dense new id, ordered by representative
        let mut new_id = vec![u32::MAX; self.vertex_count];
        let mut count = 0u32;
        for v in 0..self.vertex_count {
            let r = rep[class[v] as usize] as usize;
            if r == v {
                new_id[v] = count;
                count += 1;
            }
        }
        let vertex_map: Vec<VertexId> = (0..self.vertex_count)
            .map(|v| VertexId(new_id[rep[class[v] as usize] as usize]))
            .collect();
        let mut edges = Vec::new();
        let mut edge_map = Vec::with_capacity(self.edges.len());
        for &(a, b) in &self.edges {
            let (na, nb) = (vertex_map[a.index()], vertex_map[b.index()]);
            if na == nb {
                edge_map.push(None);
            } else {
                edge_map.push(Some(EdgeId(edges.len() as u32)));
                edges.push((na, nb));
            }
        }
        let map = MinorMap { vertex_map, edge_map };
        (MultiGraph::from_checked(count as usize, edges), map)
    }

    /// Laplacian restricted to all vertices except `ground`, as dense integer rows.
    pub(crate) fn reduced_laplacian(&self, ground: VertexId) -> Vec<Vec<i64>> {
        let n = self.vertex_count;
        let idx = |v: VertexId| -> Option<usize> {
            match v.index().cmp(&ground.index()) {
                std::cmp::Ordering::Less => Some(v.index()),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(v.index() - 1),
            }
        };
        let mut m = vec![vec![0i64; n - 1]; n - 1];
        for &(a, b) in &self.edges {
            let (ia, ib) = (idx(a), idx(b));
            if let Some(i) = ia {
                m[i][i] += 1;
            }
            if let Some(j) = ib {
                m[j][j] += 1;
            }
            if let (Some(i), Some(j)) = (ia, ib) {
                m[i][j] -= 1;
                m[j][i] -= 1;
            }
        }
        m
    }
}

fn components(n: usize, adjacency: &[Vec<(VertexId, EdgeId)>]) -> (Vec<u32>, usize) {
    let mut label = vec![u32::MAX; n];
    let mut count = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if label[s] != u32::MAX {
            continue;
        }
        label[s] = count as u32;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &(w, _) in &adjacency[u] {
                if label[w.index()] == u32::MAX {
                    label[w.index()] = count as u32;
                    stack.push(w.index());
                }
            }
        }
        count += 1;
    }
    (label, count)
}

/// How a minor's vertices and edges relate to its parent's.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorMap {
    /// Parent vertex -> child vertex (surjective).
    pub vertex_map: Vec<VertexId>,
    /// Parent edge -> child edge, `None` for deleted, contracted or looped edges.
    pub edge_map: Vec<Option<EdgeId>>,
}

impl MinorMap {
    pub fn identity(g: &MultiGraph) -> Self {
        MinorMap {
            vertex_map: g.vertices().collect(),
            edge_map: g.edge_ids().map(Some).collect(),
        }
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> Option<EdgeId> {
        self.edge_map.get(e.index()).copied().flatten()
    }

    #[inline]
    pub fn vertex(&self, v: VertexId) -> VertexId {
        self.vertex_map[v.index()]
    }

    /// `self` followed by `next` (a map out of `self`'s child graph).
    pub fn then(&self, next: &MinorMap) -> MinorMap {
        MinorMap {
            vertex_map: self.vertex_map.iter().map(|v| next.vertex(*v)).collect(),
            edge_map: self.edge_map.iter().map(|e| e.and_then(|e| next.edge(e))).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cycle(n: u32) -> MultiGraph {
        MultiGraph::from_edges(n as usize, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn complete(n: u32) -> MultiGraph {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
        MultiGraph::from_edges(n as usize, edges).unwrap()
    }

    fn has_parallel(g: &MultiGraph) -> usize {
        let mut pairs: Vec<_> = g
            .edges()
            .iter()
            .map(|&(a, b)| if a < b { (a, b) } else { (b, a) })
            .collect();
        pairs.sort();
        pairs.windows(2).filter(|w| w[0] == w[1]).count()
    }

    #[test]
    fn connectivity() {
        assert!(MultiGraph::from_edges(1, []).unwrap().is_connected());
        assert!(!MultiGraph::from_edges(2, []).unwrap().is_connected());
        let (g, _) = cycle(4).delete(EdgeId(0)).unwrap();
        assert!(g.is_connected());
        let path = MultiGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let (g, _) = path.delete(EdgeId(0)).unwrap();
        assert!(!g.is_connected());
    }

    #[test]
    fn loops_are_dropped_on_creation() {
        let g = MultiGraph::from_edges(2, [(0, 0), (0, 1), (1, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.degree(VertexId(0)), 1);
    }

    #[test]
    fn contract_cycle_gives_triangle() {
        let (g, map) = cycle(4).contract(EdgeId(1)).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(has_parallel(&g), 0);
        assert_eq!(map.edge(EdgeId(1)), None);
        // vertices 1 and 2 merged into 1; vertex 3 shifts to 2
        assert_eq!(map.vertex(VertexId(2)), VertexId(1));
        assert_eq!(map.vertex(VertexId(3)), VertexId(2));
    }

    #[test]
    fn contract_doubled_edge_discards_parallel() {
        let g = MultiGraph::from_edges(2, [(0, 1), (0, 1)]).unwrap();
        let (h, map) = g.contract(EdgeId(0)).unwrap();
        assert_eq!(h.vertex_count(), 1);
        assert_eq!(h.edge_count(), 0);
        assert_eq!(map.edge(EdgeId(1)), None);
    }

    #[test]
    fn contract_k4() {
        let (g, _) = complete(4).contract(EdgeId(0)).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 5));
        // brute-force count of parallel pairs: both remaining vertices were adjacent to
        // both ends of the contracted edge
        assert_eq!(has_parallel(&g), 2);
        assert!(g.edges().iter().all(|(a, b)| a != b));
    }

    #[test]
    fn delete_cycle_gives_path() {
        let (g, map) = cycle(4).delete(EdgeId(3)).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 3);
        let degrees: Vec<_> = g.vertices().map(|v| g.degree(v)).collect();
        assert_eq!(degrees, vec![1, 2, 2, 1]);
        assert_eq!(map.edge(EdgeId(3)), None);
        assert_eq!(map.edge(EdgeId(2)), Some(EdgeId(2)));
    }

    #[test]
    fn unknown_edge() {
        assert!(matches!(cycle(4).contract(EdgeId(9)), Err(Error::UnknownEdge(_))));
        assert!(matches!(cycle(4).delete(EdgeId(4)), Err(Error::UnknownEdge(_))));
    }

    #[test]
    fn bridges() {
        let path = MultiGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(path.is_bridge(EdgeId(0)).unwrap());
        assert!(!cycle(4).is_bridge(EdgeId(0)).unwrap());
        let doubled = MultiGraph::from_edges(2, [(0, 1), (0, 1)]).unwrap();
        assert!(!doubled.is_bridge(EdgeId(0)).unwrap());
    }
}
