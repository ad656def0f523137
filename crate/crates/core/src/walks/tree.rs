use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::RngCore;

use super::path::PathSeq;
use super::rng::RngStream;
use super::srw::DEFAULT_STEP_BUDGET;
use crate::error::{Error, Result};
use crate::exact::{edge_current_fraction, ExactProb};
use crate::lattice::{EdgeId, MinorMap, MultiGraph, VertexId};

/// A set of edges of a fixed graph, optionally oriented.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningSubgraph<'g> {
    graph: &'g MultiGraph,
    present: Vec<bool>,
    orientation: Option<Vec<Option<(VertexId, VertexId)>>>,
    root: Option<VertexId>,
}

impl<'g> SpanningSubgraph<'g> {
    pub fn empty(graph: &'g MultiGraph) -> Self {
        SpanningSubgraph {
            graph,
            present: vec![false; graph.edge_count()],
            orientation: None,
            root: None,
        }
    }

    pub fn from_edges(graph: &'g MultiGraph, edges: &[EdgeId]) -> Result<Self> {
        let mut s = Self::empty(graph);
        for &e in edges {
            graph.endpoints(e)?;
            s.present[e.index()] = true;
        }
        Ok(s)
    }

    pub fn graph(&self) -> &'g MultiGraph {
        self.graph
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.present.get(e.index()).copied().unwrap_or(false)
    }

    /// Present edges in increasing id order.
    pub fn edges(&self) -> Vec<EdgeId> {
        self.present
            .iter()
            .enumerate()
            .filter(|(_, p)| **p)
            .map(|(i, _)| EdgeId(i as u32))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.present.iter().filter(|p| **p).count()
    }

    pub fn root(&self) -> Option<VertexId> {
        self.root
    }

    /// `(from, to)` for an oriented present edge.
    pub fn orientation(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.orientation.as_ref()?.get(e.index()).copied().flatten()
    }

    /// Acyclic, connected and spanning.
    pub fn is_tree(&self) -> bool {
        let n = self.graph.vertex_count();
        if n == 0 || self.edge_count() != n - 1 {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in self.edges() {
            let (a, b) = self.graph.edges()[e.index()];
            let (ra, rb) = (find(&mut parent, a.index()), find(&mut parent, b.index()));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }

    /// The oriented edge pointing into `v`, if any.
    pub fn incoming(&self, v: VertexId) -> Option<EdgeId> {
        let o = self.orientation.as_ref()?;
        o.iter()
            .position(|x| matches!(x, Some((_, to)) if *to == v))
            .map(|i| EdgeId(i as u32))
    }

    fn insert_oriented(&mut self, e: EdgeId, from: VertexId, to: VertexId) {
        self.present[e.index()] = true;
        self.orientation.get_or_insert_with(|| vec![None; self.present.len()])[e.index()] = Some((from, to));
    }
}

/// The first-entry tree T(γ): every step into a not-yet-visited vertex draws in its edge,
/// oriented away from the start. If `a` and `b` are joined by parallel edges the one with the
/// smallest id is used.
pub fn first_entry_tree<'g>(g: &'g MultiGraph, walk: &PathSeq<VertexId>) -> Result<SpanningSubgraph<'g>> {
    for &v in walk.vertices() {
        g.check_vertex(v)?;
    }
    let mut t = SpanningSubgraph::empty(g);
    t.root = Some(*walk.first());
    t.orientation = Some(vec![None; g.edge_count()]);
    let mut seen = vec![false; g.vertex_count()];
    seen[walk.first().index()] = true;
    for w in walk.vertices().windows(2) {
        let (a, b) = (w[0], w[1]);
        if seen[b.index()] {
            continue;
        }
        let e = g
            .neighbors(a)
            .iter()
            .filter(|(x, _)| *x == b)
            .map(|(_, e)| *e)
            .min()
            .ok_or_else(|| Error::invalid(format!("{a} and {b} are not adjacent")))?;
        seen[b.index()] = true;
        t.insert_oriented(e, a, b);
    }
    Ok(t)
}

/// Uniform spanning tree by running a walk from `root` until it covers the graph and keeping
/// first-entry edges. The traversed edge slot is recorded, so parallel edges are distinguished.
pub fn aldous_broder_tree<'g>(g: &'g MultiGraph, root: VertexId, rng: &mut RngStream) -> Result<SpanningSubgraph<'g>> {
    aldous_broder_tree_with_budget(g, root, rng, DEFAULT_STEP_BUDGET)
}

pub fn aldous_broder_tree_with_budget<'g>(
    g: &'g MultiGraph,
    root: VertexId,
    rng: &mut RngStream,
    budget: u64,
) -> Result<SpanningSubgraph<'g>> {
    g.check_vertex(root)?;
    if !g.is_connected() {
        return Err(Error::invalid("graph must be connected"));
    }
    let mut t = SpanningSubgraph::empty(g);
    t.root = Some(root);
    t.orientation = Some(vec![None; g.edge_count()]);
    let mut seen = vec![false; g.vertex_count()];
    seen[root.index()] = true;
    let mut left = g.vertex_count() - 1;
    let mut v = root;
    let mut steps = 0u64;
    while left > 0 {
        if steps == budget {
            return Err(Error::StepBudget(budget));
        }
        let nbrs = g.neighbors(v);
        let (w, e) = nbrs[rng.below(nbrs.len() as u32) as usize];
        steps += 1;
        if !seen[w.index()] {
            seen[w.index()] = true;
            left -= 1;
            t.insert_oriented(e, v, w);
        }
        v = w;
    }
    Ok(t)
}

/// The unique path in the tree `t` from `from` to `to`.
pub fn tree_path(t: &SpanningSubgraph<'_>, from: VertexId, to: VertexId) -> Result<PathSeq<VertexId>> {
    let g = t.graph();
    g.check_vertex(from)?;
    g.check_vertex(to)?;
    if !t.is_tree() {
        return Err(Error::NotATree);
    }
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); g.vertex_count()];
    for e in t.edges() {
        let (a, b) = g.edges()[e.index()];
        adj[a.index()].push(b);
        adj[b.index()].push(a);
    }
    // search from the target so parent pointers read off the path forwards
    let mut parent = vec![None; g.vertex_count()];
    parent[to.index()] = Some(to);
    let mut queue = VecDeque::from([to]);
    while let Some(v) = queue.pop_front() {
        if v == from {
            break;
        }
        for &w in &adj[v.index()] {
            if parent[w.index()].is_none() {
                parent[w.index()] = Some(v);
                queue.push_back(w);
            }
        }
    }
    let mut path = vec![from];
    let mut v = from;
    while v != to {
        v = parent[v.index()].expect("tree is connected");
        path.push(v);
    }
    Ok(PathSeq::new(path))
}

/// Exact Bernoulli(p) draw: compares random bits against the binary expansion of `p`.
pub(crate) fn bernoulli_exact(p: &ExactProb, rng: &mut RngStream) -> bool {
    let q = p.value();
    if q.is_zero() {
        return false;
    }
    if q >= &num_rational::BigRational::one() {
        return true;
    }
    let den: BigInt = q.denom().clone();
    let mut num: BigInt = q.numer().clone();
    let mut bits = 0u64;
    let mut avail = 0u32;
    loop {
        num <<= 1;
        let p_bit = num >= den;
        if p_bit {
            num -= &den;
        }
        if avail == 0 {
            bits = rng.next_u64();
            avail = 64;
        }
        let u_bit = bits & 1 == 1;
        bits >>= 1;
        avail -= 1;
        if u_bit != p_bit {
            return p_bit;
        }
        if num.is_zero() {
            // remaining expansion of p is all zeros, so U >= p
            return false;
        }
    }
}

/// Sequential contraction/deletion sampler: edges are decided in `enumeration` order, each
/// kept with probability equal to its current fraction in the current minor.
pub fn mu3_sequential_sample<'g>(
    g: &'g MultiGraph,
    enumeration: &[EdgeId],
    rng: &mut RngStream,
) -> Result<SpanningSubgraph<'g>> {
    crate::exact::check_enumeration(g, enumeration)?;
    let mut minor = g.clone();
    let mut map = MinorMap::identity(g);
    let mut kept = Vec::new();
    for &e in enumeration {
        let Some(me) = map.edge(e) else {
            // became a loop: some tree path already joins its ends
            continue;
        };
        let include = if minor.is_bridge(me)? {
            true
        } else {
            let p = edge_current_fraction(&minor, me)?;
            bernoulli_exact(&p, rng)
        };
        let (next, step) = if include {
            kept.push(e);
            minor.contract(me)?
        } else {
            minor.delete(me)?
        };
        map = map.then(&step);
        minor = next;
    }
    SpanningSubgraph::from_edges(g, &kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::brute_force_tree_enumeration;
    use crate::lattice::{complete_graph, cycle_graph, path_graph, rect_grid};
    use crate::walks::{tree_path_matches_erasure, srw_path, StopRule};

    #[test]
    fn forced_walk_tree() {
        let g = path_graph(3);
        let w = PathSeq::on_graph(&g, vec![VertexId(0), VertexId(1), VertexId(2)]).unwrap();
        let t = first_entry_tree(&g, &w).unwrap();
        assert_eq!(t.edges(), vec![EdgeId(0), EdgeId(1)]);
        assert!(t.is_tree());
        assert_eq!(t.orientation(EdgeId(1)), Some((VertexId(1), VertexId(2))));
    }

    #[test]
    fn star_paths() {
        let g = MultiGraph::from_edges(3, [(0, 1), (0, 2)]).unwrap();
        let t = SpanningSubgraph::from_edges(&g, &[EdgeId(0), EdgeId(1)]).unwrap();
        assert_eq!(tree_path(&t, VertexId(1), VertexId(2)).unwrap().vertices(), &[VertexId(1), VertexId(0), VertexId(2)]);
        assert_eq!(tree_path(&t, VertexId(2), VertexId(2)).unwrap().len(), 0);
        let not = SpanningSubgraph::from_edges(&g, &[EdgeId(0)]).unwrap();
        assert!(matches!(tree_path(&not, VertexId(1), VertexId(0)), Err(Error::NotATree)));
        assert!(matches!(tree_path(&t, VertexId(1), VertexId(7)), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn aldous_broder_gives_oriented_trees() {
        let g = rect_grid(&[3, 3]).unwrap();
        for s in 0..50 {
            let t = aldous_broder_tree(&g, VertexId(4), &mut RngStream::new(1, s)).unwrap();
            assert!(t.is_tree());
            assert!(t.incoming(VertexId(4)).is_none());
            for v in g.vertices().filter(|v| *v != VertexId(4)) {
                let e = t.incoming(v).unwrap();
                let (from, _) = t.orientation(e).unwrap();
                // following incoming edges leads back to the root
                assert_eq!(*tree_path(&t, v, VertexId(4)).unwrap().vertices().get(1).unwrap(), from);
            }
        }
    }

    #[test]
    fn aldous_broder_uniform_on_cycle() {
        let g = cycle_graph(4);
        let reps = 100_000u64;
        let mut counts = [0u64; 4];
        for s in 0..reps {
            let t = aldous_broder_tree(&g, VertexId(0), &mut RngStream::new(3, s)).unwrap();
            let missing = (0..4).find(|&i| !t.contains(EdgeId(i))).unwrap();
            counts[missing as usize] += 1;
        }
        let sigma = (reps as f64 * 0.25 * 0.75).sqrt();
        for c in counts {
            assert!((c as f64 - reps as f64 / 4.0).abs() < 4.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn tree_path_is_reversed_erasure() {
        for g in [cycle_graph(5), complete_graph(4), rect_grid(&[2, 3]).unwrap()] {
            for s in 0..300 {
                let mut rng = RngStream::new(8, s);
                let w = VertexId(g.vertex_count() as u32 - 1);
                assert!(tree_path_matches_erasure(&g, VertexId(0), w, &mut rng).unwrap());
            }
        }
        let g = path_graph(4);
        let mut rng = RngStream::new(0, 0);
        let walk = srw_path(&g, VertexId(0), &StopRule::hit(vec![VertexId(3)]), &mut rng).unwrap();
        let t = first_entry_tree(&g, &walk).unwrap();
        assert!(t.is_tree());
    }

    #[test]
    fn exact_bernoulli_frequencies() {
        let p = ExactProb::new(3, 4);
        let reps = 100_000u64;
        let mut rng = RngStream::new(2, 0);
        let hits = (0..reps).filter(|_| bernoulli_exact(&p, &mut rng)).count() as f64;
        let sigma = (reps as f64 * 0.75 * 0.25).sqrt();
        assert!((hits - 75_000.0).abs() < 4.0 * sigma);
        assert!(!bernoulli_exact(&ExactProb::zero(), &mut rng));
        assert!(bernoulli_exact(&ExactProb::one(), &mut rng));
    }

    #[test]
    fn sequential_sampler() {
        let p = path_graph(4);
        let order: Vec<_> = p.edge_ids().collect();
        let t = mu3_sequential_sample(&p, &order, &mut RngStream::new(0, 0)).unwrap();
        assert_eq!(t.edges(), order);

        let c = cycle_graph(4);
        let order: Vec<_> = c.edge_ids().collect();
        let reps = 20_000u64;
        let mut first = 0u64;
        for s in 0..reps {
            let t = mu3_sequential_sample(&c, &order, &mut RngStream::new(4, s)).unwrap();
            assert!(t.is_tree());
            first += t.contains(EdgeId(0)) as u64;
        }
        let sigma = (reps as f64 * 0.75 * 0.25).sqrt();
        assert!((first as f64 - 0.75 * reps as f64).abs() < 3.0 * sigma);

        let grid = rect_grid(&[2, 3]).unwrap();
        let trees = brute_force_tree_enumeration(&grid).unwrap();
        let order: Vec<_> = grid.edge_ids().rev().collect();
        for s in 0..200 {
            let t = mu3_sequential_sample(&grid, &order, &mut RngStream::new(6, s)).unwrap();
            assert!(trees.contains(&t.edges()));
        }
    }
}
