use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticeCoord, MultiGraph, VertexId};

/// A finite walk, stored as its vertex sequence. Its length is the number of steps.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PathSeq<V> {
    vertices: Vec<V>,
}

impl<V: Clone + Eq + Hash + Debug> PathSeq<V> {
    /// Wraps a vertex sequence without checking adjacency. Panics on an empty sequence.
    pub fn new(vertices: Vec<V>) -> Self {
        assert!(!vertices.is_empty(), "a path visits at least one vertex");
        PathSeq { vertices }
    }

    pub fn single(v: V) -> Self {
        PathSeq { vertices: vec![v] }
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn vertices(&self) -> &[V] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<V> {
        self.vertices
    }

    pub fn first(&self) -> &V {
        &self.vertices[0]
    }

    pub fn last(&self) -> &V {
        self.vertices.last().expect("nonempty")
    }

    pub fn at(&self, i: usize) -> Option<&V> {
        self.vertices.get(i)
    }

    pub fn reverse(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        PathSeq { vertices: v }
    }

    /// `self` followed by `other`; `other` must start where `self` ends.
    pub fn concat(&self, other: &PathSeq<V>) -> Result<Self> {
        if self.last() != other.first() {
            return Err(Error::EndpointMismatch {
                left: format!("{:?}", self.last()),
                right: format!("{:?}", other.first()),
            });
        }
        let mut v = self.vertices.clone();
        v.extend_from_slice(&other.vertices[1..]);
        Ok(PathSeq { vertices: v })
    }

    /// The first `n` steps.
    pub fn prefix(&self, n: usize) -> Result<Self> {
        if n > self.len() {
            return Err(Error::Range { index: n, len: self.len() });
        }
        Ok(PathSeq {
            vertices: self.vertices[..=n].to_vec(),
        })
    }

    /// Everything from step `n` on.
    pub fn suffix(&self, n: usize) -> Result<Self> {
        if n > self.len() {
            return Err(Error::Range { index: n, len: self.len() });
        }
        Ok(PathSeq {
            vertices: self.vertices[n..].to_vec(),
        })
    }

    pub fn is_self_avoiding(&self) -> bool {
        let mut seen = FxHashSet::default();
        self.vertices.iter().all(|v| seen.insert(v.clone()))
    }

    /// Chronological loop erasure. Endpoints are preserved and the result is self-avoiding.
    pub fn loop_erase(&self) -> Self {
        let mut eraser = LoopEraser::new();
        for v in &self.vertices {
            eraser.push(v.clone());
        }
        eraser.into_path()
    }

    /// Vertex multiset as a sorted list.
    pub fn site_multiset(&self) -> Vec<V>
    where
        V: Ord,
    {
        let mut v = self.vertices.clone();
        v.sort();
        v
    }
}

impl PathSeq<VertexId> {
    /// Checks that consecutive vertices are adjacent in `g`.
    pub fn on_graph(g: &MultiGraph, vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::invalid("empty path"));
        }
        for &v in &vertices {
            g.check_vertex(v)?;
        }
        for w in vertices.windows(2) {
            if g.multiplicity(w[0], w[1]) == 0 {
                return Err(Error::invalid(format!("{} and {} are not adjacent", w[0], w[1])));
            }
        }
        Ok(PathSeq { vertices })
    }
}

impl PathSeq<LatticeCoord> {
    /// Checks that consecutive points are lattice neighbours of a common dimension.
    pub fn on_lattice(vertices: Vec<LatticeCoord>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::invalid("empty path"));
        }
        let d = vertices[0].dim();
        if vertices.iter().any(|c| c.dim() != d) {
            return Err(Error::invalid("mixed dimensions in path"));
        }
        if vertices.windows(2).any(|w| !w[0].is_adjacent(&w[1])) {
            return Err(Error::invalid("consecutive lattice points must be neighbours"));
        }
        Ok(PathSeq { vertices })
    }
}

/// Incremental loop erasure: keeps the erased path as a stack plus a position index, so each
/// pushed vertex costs amortized O(1).
#[derive(Clone, Debug)]
pub struct LoopEraser<V> {
    stack: Vec<V>,
    position: FxHashMap<V, usize>,
}

impl<V: Clone + Eq + Hash + Debug> Default for LoopEraser<V> {
    fn default() -> Self {
        Self::new()
    }
}

impl<V: Clone + Eq + Hash + Debug> LoopEraser<V> {
    pub fn new() -> Self {
        LoopEraser {
            stack: Vec::new(),
            position: FxHashMap::default(),
        }
    }

    /// Appends the next walk vertex; if it is already on the erased path, the loop it closes
    /// is removed. Returns the erased path length afterwards (in vertices).
    pub fn push(&mut self, v: V) -> usize {
        if let Some(&i) = self.position.get(&v) {
            for w in self.stack.drain(i + 1..) {
                self.position.remove(&w);
            }
        } else {
            self.position.insert(v.clone(), self.stack.len());
            self.stack.push(v);
        }
        self.stack.len()
    }

    pub fn position(&self, v: &V) -> Option<usize> {
        self.position.get(v).copied()
    }

    pub fn contains(&self, v: &V) -> bool {
        self.position.contains_key(v)
    }

    pub fn current(&self) -> &[V] {
        &self.stack
    }

    pub fn clear(&mut self) {
        self.stack.clear();
        self.position.clear();
    }

    pub fn into_path(self) -> PathSeq<V> {
        PathSeq::new(self.stack)
    }
}

/// Number of time indices `j` with `q(j)` on `p`, skipping visits to `exclude`.
/// Each hit is counted with the multiplicity of `q`'s visits.
pub fn intersection_count<V: Clone + Eq + Hash + Debug>(p: &PathSeq<V>, q: &PathSeq<V>, exclude: Option<&V>) -> usize {
    let sites: FxHashSet<&V> = p.vertices().iter().collect();
    q.vertices()
        .iter()
        .filter(|v| Some(*v) != exclude && sites.contains(v))
        .count()
}

/// True if `p(i) == q(j)` for some `i, j` not both zero.
pub fn intersects<V: Clone + Eq + Hash + Debug>(p: &PathSeq<V>, q: &PathSeq<V>) -> bool {
    let mut first = FxHashMap::default();
    for (i, v) in p.vertices().iter().enumerate() {
        first.entry(v).or_insert(i);
    }
    let later: FxHashSet<&V> = p.vertices()[1..].iter().collect();
    q.vertices().iter().enumerate().any(|(j, v)| {
        if j > 0 {
            first.contains_key(v)
        } else {
            later.contains(v)
        }
    })
}

/// Probability that a simple random walk follows `p`: the product of inverse degrees over
/// every vertex but the last. With parallel edges each step is weighted by the multiplicity.
pub fn path_weight(g: &MultiGraph, p: &PathSeq<VertexId>) -> BigRational {
    p.vertices()
        .windows(2)
        .map(|w| {
            BigRational::new(
                BigInt::from(g.multiplicity(w[0], w[1])),
                BigInt::from(g.degree(w[0])),
            )
        })
        .fold(BigRational::one(), |acc, x| acc * x)
}
