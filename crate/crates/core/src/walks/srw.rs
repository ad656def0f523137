use rustc_hash::FxHashSet;

use super::path::PathSeq;
use super::rng::RngStream;
use crate::error::{Error, Result};
use crate::lattice::{LatticeCoord, MultiGraph, VertexId};

/// Default cap on walk steps before a sampler gives up.
pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StopKind<V> {
    /// Exactly this many steps.
    Steps(u64),
    /// First visit to any vertex of the set (time 0 counts).
    Hit(Vec<V>),
    /// First time every vertex has been visited.
    Cover,
}

/// When a walk stops, plus a step budget that guards against runaway walks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StopRule<V> {
    pub kind: StopKind<V>,
    pub budget: u64,
}

impl<V> StopRule<V> {
    pub fn steps(m: u64) -> Self {
        StopRule { kind: StopKind::Steps(m), budget: DEFAULT_STEP_BUDGET.max(m) }
    }

    pub fn hit(targets: Vec<V>) -> Self {
        StopRule { kind: StopKind::Hit(targets), budget: DEFAULT_STEP_BUDGET }
    }

    pub fn cover() -> Self {
        StopRule { kind: StopKind::Cover, budget: DEFAULT_STEP_BUDGET }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }
}

/// One uniform step along an edge slot, so parallel edges count with multiplicity.
#[inline]
pub(crate) fn graph_step(g: &MultiGraph, v: VertexId, rng: &mut RngStream) -> VertexId {
    let nbrs = g.neighbors(v);
    nbrs[rng.below(nbrs.len() as u32) as usize].0
}

/// Simple random walk on a finite multigraph.
pub fn srw_path(g: &MultiGraph, start: VertexId, stop: &StopRule<VertexId>, rng: &mut RngStream) -> Result<PathSeq<VertexId>> {
    g.check_vertex(start)?;
    let mut path = vec![start];
    let mut v = start;
    match &stop.kind {
        StopKind::Steps(m) => {
            if *m > stop.budget {
                return Err(Error::StepBudget(stop.budget));
            }
            if *m > 0 && g.degree(v) == 0 {
                return Err(Error::invalid(format!("{start} is isolated")));
            }
            for _ in 0..*m {
                v = graph_step(g, v, rng);
                path.push(v);
            }
        }
        StopKind::Hit(targets) => {
            let mut is_target = vec![false; g.vertex_count()];
            for &t in targets {
                g.check_vertex(t)?;
                is_target[t.index()] = true;
            }
            let (comp, _) = g.components();
            if !targets.iter().any(|t| comp[t.index()] == comp[start.index()]) {
                return Err(Error::invalid("no target is reachable from the start"));
            }
            let mut steps = 0u64;
            while !is_target[v.index()] {
                if steps == stop.budget {
                    return Err(Error::StepBudget(stop.budget));
                }
                v = graph_step(g, v, rng);
                path.push(v);
                steps += 1;
            }
        }
        StopKind::Cover => {
            if !g.is_connected() {
                return Err(Error::invalid("cover time is infinite on a disconnected graph"));
            }
            let mut seen = vec![false; g.vertex_count()];
            seen[v.index()] = true;
            let mut left = g.vertex_count() - 1;
            let mut steps = 0u64;
            while left > 0 {
                if steps == stop.budget {
                    return Err(Error::StepBudget(stop.budget));
                }
                v = graph_step(g, v, rng);
                path.push(v);
                steps += 1;
                if !seen[v.index()] {
                    seen[v.index()] = true;
                    left -= 1;
                }
            }
        }
    }
    Ok(PathSeq::new(path))
}

/// One uniform nearest-neighbour step on Z^d, in place.
#[inline]
pub(crate) fn lattice_step(pos: &mut [i64], rng: &mut RngStream) {
    let k = rng.below(2 * pos.len() as u32) as usize;
    pos[k >> 1] += if k & 1 == 0 { 1 } else { -1 };
}

/// Simple random walk on Z^d without materializing a graph. Cover time is rejected.
pub fn srw_path_zd(start: &LatticeCoord, stop: &StopRule<LatticeCoord>, rng: &mut RngStream) -> Result<PathSeq<LatticeCoord>> {
    let d = start.dim();
    if d == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    let mut pos = start.0.clone();
    let mut path = vec![start.clone()];
    match &stop.kind {
        StopKind::Steps(m) => {
            if *m > stop.budget {
                return Err(Error::StepBudget(stop.budget));
            }
            for _ in 0..*m {
                lattice_step(&mut pos, rng);
                path.push(LatticeCoord(pos.clone()));
            }
        }
        StopKind::Hit(targets) => {
            if targets.iter().any(|t| t.dim() != d) {
                return Err(Error::invalid("target dimension differs from the start"));
            }
            if targets.is_empty() {
                return Err(Error::invalid("empty target set never stops"));
            }
            let set: FxHashSet<&[i64]> = targets.iter().map(|t| t.0.as_slice()).collect();
            let mut steps = 0u64;
            while !set.contains(pos.as_slice()) {
                if steps == stop.budget {
                    return Err(Error::StepBudget(stop.budget));
                }
                lattice_step(&mut pos, rng);
                path.push(LatticeCoord(pos.clone()));
                steps += 1;
            }
        }
        StopKind::Cover => return Err(Error::invalid("cover time is infinite on Z^d")),
    }
    Ok(PathSeq::new(path))
}
