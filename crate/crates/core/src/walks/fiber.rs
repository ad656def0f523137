use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::path::{LoopEraser, PathSeq};
use crate::error::{Error, Result};
use crate::lattice::{MultiGraph, VertexId};

/// Default cap on fiber sizes.
pub const DEFAULT_FIBER_LIMIT: usize = 1_000_000;

fn check_self_avoiding(g: &MultiGraph, alpha: &PathSeq<VertexId>) -> Result<()> {
    PathSeq::on_graph(g, alpha.vertices().to_vec())?;
    if !alpha.is_self_avoiding() {
        return Err(Error::invalid("fiber base path must be self-avoiding"));
    }
    Ok(())
}

fn distances_to(g: &MultiGraph, target: VertexId) -> Vec<u64> {
    let mut dist = vec![u64::MAX; g.vertex_count()];
    dist[target.index()] = 0;
    let mut queue = VecDeque::from([target]);
    while let Some(v) = queue.pop_front() {
        for &(w, _) in g.neighbors(v) {
            if dist[w.index()] == u64::MAX {
                dist[w.index()] = dist[v.index()] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// All length-`m` walks (as vertex sequences) whose loop erasure is `alpha`.
pub fn gamma_fiber(g: &MultiGraph, alpha: &PathSeq<VertexId>, m: usize) -> Result<Vec<PathSeq<VertexId>>> {
    gamma_fiber_with_limit(g, alpha, m, DEFAULT_FIBER_LIMIT)
}

pub fn gamma_fiber_with_limit(g: &MultiGraph, alpha: &PathSeq<VertexId>, m: usize, limit: usize) -> Result<Vec<PathSeq<VertexId>>> {
    check_self_avoiding(g, alpha)?;
    let end = *alpha.last();
    let dist = distances_to(g, end);
    let nbrs: Vec<Vec<VertexId>> = g
        .vertices()
        .map(|v| {
            let mut n: Vec<VertexId> = g.neighbors(v).iter().map(|(w, _)| *w).collect();
            n.sort();
            n.dedup();
            n
        })
        .collect();
    let mut out = Vec::new();
    let mut walk = vec![*alpha.first()];
    let mut explored = 0u64;
    extend(&nbrs, &dist, alpha.vertices(), m, &mut walk, &mut out, limit, &mut explored)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    nbrs: &[Vec<VertexId>],
    dist: &[u64],
    alpha: &[VertexId],
    m: usize,
    walk: &mut Vec<VertexId>,
    out: &mut Vec<PathSeq<VertexId>>,
    limit: usize,
    explored: &mut u64,
) -> Result<()> {
    *explored += 1;
    if *explored > 64 * limit as u64 {
        return Err(Error::ResourceLimit { what: "fiber search nodes", requested: *explored, limit: 64 * limit as u64 });
    }
    let steps = walk.len() - 1;
    let here = *walk.last().expect("nonempty");
    if dist[here.index()] > (m - steps) as u64 {
        return Ok(());
    }
    if steps == m {
        let mut eraser = LoopEraser::new();
        for &v in walk.iter() {
            eraser.push(v);
        }
        if eraser.current() == alpha {
            if out.len() == limit {
                return Err(Error::ResourceLimit { what: "fiber size", requested: limit as u64 + 1, limit: limit as u64 });
            }
            out.push(PathSeq::new(walk.clone()));
        }
        return Ok(());
    }
    for &w in &nbrs[here.index()] {
        walk.push(w);
        extend(nbrs, dist, alpha, m, walk, out, limit, explored)?;
        walk.pop();
    }
    Ok(())
}

/// Length-`m` walks whose backward loop erasure is `alpha`: the reversals of the forward
/// fiber of `alpha` reversed.
pub fn phi_fiber(g: &MultiGraph, alpha: &PathSeq<VertexId>, m: usize) -> Result<Vec<PathSeq<VertexId>>> {
    Ok(gamma_fiber(g, &alpha.reverse(), m)?
        .into_iter()
        .map(|p| p.reverse())
        .collect())
}

/// Outcome of comparing the forward and backward fibers of a path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub gamma_size: usize,
    pub phi_size: usize,
    /// Site multisets agree as multisets of multisets.
    pub multisets_match: bool,
    /// Degree-product weights summed over walks that avoid `avoid` after time 0 agree.
    pub weights_match: bool,
}

impl FiberReport {
    pub fn holds(&self) -> bool {
        self.gamma_size == self.phi_size && self.multisets_match && self.weights_match
    }
}

/// Product of inverse degrees over all but the last vertex.
fn degree_weight(g: &MultiGraph, p: &PathSeq<VertexId>) -> BigRational {
    let v = p.vertices();
    v[..v.len() - 1]
        .iter()
        .map(|x| BigRational::new(BigInt::one(), BigInt::from(g.degree(*x))))
        .fold(BigRational::one(), |a, b| a * b)
}

/// Compares the two fibers of `alpha` at length `m`. The weighted sums are restricted to
/// walks that do not visit `avoid` after time 0 (default: the last vertex of `alpha`, which
/// then may only appear at the end).
pub fn fiber_report(g: &MultiGraph, alpha: &PathSeq<VertexId>, m: usize, avoid: Option<VertexId>) -> Result<FiberReport> {
    let gamma = gamma_fiber(g, alpha, m)?;
    let phi = phi_fiber(g, alpha, m)?;
    let sig = |set: &[PathSeq<VertexId>]| {
        let mut all: Vec<Vec<VertexId>> = set.iter().map(|p| p.site_multiset()).collect();
        all.sort();
        all
    };
    let avoid = avoid.unwrap_or(*alpha.last());
    let in_s = |p: &PathSeq<VertexId>| {
        // the stopping vertex itself is allowed at the final time
        let v = p.vertices();
        if v.len() == 1 {
            return true;
        }
        let inner = if avoid == *alpha.last() { &v[1..v.len() - 1] } else { &v[1..] };
        !inner.contains(&avoid)
    };
    let weight = |set: &[PathSeq<VertexId>]| -> BigRational {
        set.iter()
            .filter(|p| in_s(p))
            .map(|p| degree_weight(g, p))
            .fold(BigRational::zero(), |a, b| a + b)
    };
    Ok(FiberReport {
        gamma_size: gamma.len(),
        phi_size: phi.len(),
        multisets_match: sig(&gamma) == sig(&phi),
        weights_match: weight(&gamma) == weight(&phi),
    })
}

/// True iff the two fibers have matching site multisets and matching restricted weights.
pub fn verify_fiber_multisets(g: &MultiGraph, alpha: &PathSeq<VertexId>, m: usize) -> Result<bool> {
    Ok(fiber_report(g, alpha, m, None)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{complete_graph, cycle_graph};

    fn path(g: &MultiGraph, v: &[u32]) -> PathSeq<VertexId> {
        PathSeq::on_graph(g, v.iter().map(|x| VertexId(*x)).collect()).unwrap()
    }

    #[test]
    fn trivial_fibers() {
        let g = cycle_graph(4);
        assert_eq!(gamma_fiber(&g, &path(&g, &[0, 1]), 1).unwrap(), vec![path(&g, &[0, 1])]);
        assert_eq!(gamma_fiber(&g, &path(&g, &[0]), 0).unwrap(), vec![path(&g, &[0])]);
        assert_eq!(phi_fiber(&g, &path(&g, &[0, 1]), 1).unwrap(), vec![path(&g, &[0, 1])]);
        assert!(gamma_fiber(&g, &path(&g, &[0, 1, 2]), 1).unwrap().is_empty());
    }

    #[test]
    fn cycle_arc_members_erase_correctly() {
        let g = cycle_graph(4);
        let arc = path(&g, &[0, 1, 2]);
        for m in 0..=7 {
            let fib = gamma_fiber(&g, &arc, m).unwrap();
            for p in &fib {
                assert_eq!(p.len(), m);
                assert_eq!(p.loop_erase(), arc);
            }
            assert_eq!(phi_fiber(&g, &arc, m).unwrap().len(), gamma_fiber(&g, &arc.reverse(), m).unwrap().len());
            assert!(verify_fiber_multisets(&g, &arc, m).unwrap());
        }
        assert!(!gamma_fiber(&g, &arc, 4).unwrap().is_empty());
    }

    #[test]
    fn k4_short_paths() {
        let g = complete_graph(4);
        for alpha in [vec![0], vec![0, 1], vec![0, 1, 2], vec![2, 0, 3]] {
            let a = path(&g, &alpha);
            for m in a.len()..=6 {
                let r = fiber_report(&g, &a, m, None).unwrap();
                assert!(r.holds(), "{alpha:?} m={m} {r:?}");
                let r0 = fiber_report(&g, &a, m, Some(VertexId(alpha[0]))).unwrap();
                assert!(r0.holds());
            }
        }
    }

    #[test]
    fn rejects_bad_input_and_large_fibers() {
        let g = complete_graph(4);
        assert!(gamma_fiber(&g, &PathSeq::new(vec![VertexId(0), VertexId(1), VertexId(0)]), 2).is_err());
        assert!(matches!(
            gamma_fiber_with_limit(&g, &path(&g, &[0, 1]), 9, 10),
            Err(Error::ResourceLimit { .. })
        ));
    }
}
