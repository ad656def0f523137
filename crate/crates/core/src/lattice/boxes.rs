use std::fmt;

use serde::{Deserialize, Serialize};

use super::graph::{MinorMap, MultiGraph, VertexId};
use crate::error::{Error, Result};

/// Default cap on materialized lattice vertices.
pub const DEFAULT_VERTEX_BUDGET: u64 = 5_000_000;

/// A point of `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeCoord(pub Vec<i64>);

impl LatticeCoord {
    pub fn origin(d: usize) -> Self {
        LatticeCoord(vec![0; d])
    }

    /// `r` times the first unit vector.
    pub fn axis(d: usize, r: i64) -> Self {
        let mut c = vec![0; d];
        c[0] = r;
        LatticeCoord(c)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Chebyshev norm, the distance used throughout.
    pub fn norm(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn dist(&self, other: &LatticeCoord) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).max().unwrap_or(0)
    }

    /// True when the points differ by one in exactly one coordinate.
    pub fn is_adjacent(&self, other: &LatticeCoord) -> bool {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).sum::<i64>() == 1
    }
}

impl fmt::Display for LatticeCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Index arithmetic for the cube `{-n..n}^d` with lexicographic numbering (first coordinate
/// most significant). Used directly by walkers that never materialize the graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoxShape {
    pub d: usize,
    pub n: u32,
}

impl BoxShape {
    pub fn new(d: usize, n: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        let side = 2 * n as u64 + 1;
        if side.checked_pow(d as u32).is_none() {
            return Err(Error::invalid(format!("box d={d} n={n} overflows u64")));
        }
        Ok(BoxShape { d, n })
    }

    #[inline]
    pub fn side(&self) -> u64 {
        2 * self.n as u64 + 1
    }

    pub fn vertex_count(&self) -> u64 {
        self.side().pow(self.d as u32)
    }

    pub fn edge_count(&self) -> u64 {
        self.d as u64 * self.side().pow(self.d as u32 - 1) * 2 * self.n as u64
    }

    /// Index stride of coordinate `axis`.
    #[inline]
    pub fn stride(&self, axis: usize) -> u64 {
        self.side().pow((self.d - 1 - axis) as u32)
    }

    pub fn contains(&self, c: &[i64]) -> bool {
        c.len() == self.d && c.iter().all(|x| x.abs() <= self.n as i64)
    }

    pub fn index(&self, c: &[i64]) -> Option<u64> {
        if !self.contains(c) {
            return None;
        }
        let side = self.side() as i64;
        Some(c.iter().fold(0i64, |acc, &x| acc * side + x + self.n as i64) as u64)
    }

    pub fn coord(&self, mut index: u64) -> LatticeCoord {
        let side = self.side();
        let mut c = vec![0i64; self.d];
        for slot in c.iter_mut().rev() {
            *slot = (index % side) as i64 - self.n as i64;
            index /= side;
        }
        LatticeCoord(c)
    }
}

/// The nearest-neighbour graph on `{-n..n}^d`.
#[derive(Clone, Debug)]
pub struct LatticeBox {
    shape: BoxShape,
    graph: MultiGraph,
}

impl LatticeBox {
    pub fn new(d: usize, n: u32) -> Result<Self> {
        Self::with_budget(d, n, DEFAULT_VERTEX_BUDGET)
    }

    pub fn with_budget(d: usize, n: u32, vertex_budget: u64) -> Result<Self> {
        let shape = BoxShape::new(d, n)?;
        let count = shape.vertex_count();
        if count > vertex_budget {
            return Err(Error::ResourceLimit {
                what: "lattice box vertices",
                requested: count,
                limit: vertex_budget,
            });
        }
        if count > u32::MAX as u64 {
            return Err(Error::invalid("box too large for 32-bit vertex ids"));
        }
        let mut edges = Vec::with_capacity(shape.edge_count() as usize);
        let mut c = vec![0i64; d];
        for v in 0..count {
            // decode lazily: coordinates of v
            let mut rest = v;
            for slot in c.iter_mut().rev() {
                *slot = (rest % shape.side()) as i64 - n as i64;
                rest /= shape.side();
            }
            for (axis, &x) in c.iter().enumerate() {
                if x < n as i64 {
                    edges.push((VertexId(v as u32), VertexId((v + shape.stride(axis)) as u32)));
                }
            }
        }
        Ok(LatticeBox {
            shape,
            graph: MultiGraph::from_checked(count as usize, edges),
        })
    }

    pub fn shape(&self) -> BoxShape {
        self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.d
    }

    pub fn radius(&self) -> u32 {
        self.shape.n
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn vertex(&self, c: &LatticeCoord) -> Option<VertexId> {
        self.shape.index(&c.0).map(|i| VertexId(i as u32))
    }

    pub fn coord(&self, v: VertexId) -> LatticeCoord {
        self.shape.coord(v.0 as u64)
    }

    pub fn origin(&self) -> VertexId {
        self.vertex(&LatticeCoord::origin(self.dim())).expect("origin is in every box")
    }

    pub fn is_boundary(&self, v: VertexId) -> bool {
        self.coord(v).norm() == self.shape.n as i64
    }

    /// Edge joining two lattice points, if both are in the box and adjacent.
    pub fn edge_between(&self, a: &LatticeCoord, b: &LatticeCoord) -> Option<super::EdgeId> {
        let (va, vb) = (self.vertex(a)?, self.vertex(b)?);
        self.graph
            .neighbors(va)
            .iter()
            .find(|(w, _)| *w == vb)
            .map(|&(_, e)| e)
    }

    /// Identifies every vertex of Chebyshev norm greater than `m` into one wired vertex.
    /// Edges between two collapsed vertices disappear; edges from norm-`m` vertices to the
    /// collapsed set become parallel edges to the wired vertex. The wired vertex takes id 0
    /// (it contains the lexicographically first corner).
    pub fn wired_quotient(&self, m: u32) -> Result<(MultiGraph, MinorMap)> {
        if m >= self.shape.n {
            return Err(Error::RadiusOutOfRange { m, n: self.shape.n });
        }
        let class: Vec<u32> = self
            .graph
            .vertices()
            .map(|v| if self.coord(v).norm() > m as i64 { 0 } else { v.0 })
            .collect();
        Ok(self.graph.identify(&class))
    }
}

/// Rectangular grid graph with the given side lengths (in vertices), lexicographic numbering.
pub fn rect_grid(dims: &[usize]) -> Result<MultiGraph> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::invalid("grid sides must be positive"));
    }
    let count: usize = dims.iter().product();
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len() - 1).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let mut edges = Vec::new();
    for v in 0..count {
        for (axis, &side) in dims.iter().enumerate() {
            if (v / strides[axis]) % side + 1 < side {
                edges.push((VertexId(v as u32), VertexId((v + strides[axis]) as u32)));
            }
        }
    }
    Ok(MultiGraph::from_checked(count, edges))
}
