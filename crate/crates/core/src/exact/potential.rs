use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{linalg, ExactLimits, ExactProb};
use crate::error::{Error, Result};
use crate::lattice::{LatticeBox, MultiGraph, VertexId};

/// Exact solution of a discrete Dirichlet problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicSolution {
    /// Value per vertex: 1 on targets, 0 on avoids, the multiplicity-weighted neighbour
    /// average elsewhere.
    pub values: Vec<BigRational>,
    /// Free vertices whose component touches neither boundary set. Their value is 0 by
    /// convention since the walk never hits a target from there.
    pub isolated: Vec<VertexId>,
}

impl HarmonicSolution {
    pub fn value(&self, v: VertexId) -> &BigRational {
        &self.values[v.index()]
    }
}

/// Probability that a simple random walk from each vertex hits `targets` before `avoids`.
pub fn harmonic_hitting_probability(
    g: &MultiGraph,
    targets: &[VertexId],
    avoids: &[VertexId],
) -> Result<HarmonicSolution> {
    if targets.is_empty() || avoids.is_empty() {
        return Err(Error::invalid("target and avoid sets must be nonempty"));
    }
    let n = g.vertex_count();
    let limits = ExactLimits::default();
    if n > limits.max_vertices {
        return Err(Error::ResourceLimit {
            what: "exact solve vertices",
            requested: n as u64,
            limit: limits.max_vertices as u64,
        });
    }
    // 1 = target, 2 = avoid
    let mut kind = vec![0u8; n];
    for &t in targets {
        g.check_vertex(t)?;
        kind[t.index()] = 1;
    }
    for &a in avoids {
        g.check_vertex(a)?;
        if kind[a.index()] == 1 {
            return Err(Error::invalid(format!("{a} is both a target and an avoid")));
        }
        kind[a.index()] = 2;
    }

    // free vertices reachable from a boundary vertex through free vertices
    let mut reached = vec![false; n];
    let mut stack: Vec<VertexId> = g.vertices().filter(|v| kind[v.index()] != 0).collect();
    while let Some(u) = stack.pop() {
        for &(w, _) in g.neighbors(u) {
            if kind[w.index()] == 0 && !reached[w.index()] {
                reached[w.index()] = true;
                stack.push(w);
            }
        }
    }
    let unknowns: Vec<VertexId> = g.vertices().filter(|v| reached[v.index()]).collect();
    let isolated: Vec<VertexId> = g
        .vertices()
        .filter(|v| kind[v.index()] == 0 && !reached[v.index()])
        .collect();
    let mut slot = vec![usize::MAX; n];
    for (i, v) in unknowns.iter().enumerate() {
        slot[v.index()] = i;
    }
    let mut a = vec![vec![0i64; unknowns.len()]; unknowns.len()];
    let mut b = vec![BigRational::zero(); unknowns.len()];
    for (i, &v) in unknowns.iter().enumerate() {
        a[i][i] = g.degree(v) as i64;
        let mut hits = 0i64;
        for &(w, _) in g.neighbors(v) {
            match kind[w.index()] {
                0 => a[i][slot[w.index()]] -= 1,
                1 => hits += 1,
                _ => {}
            }
        }
        b[i] = BigRational::from_integer(hits.into());
    }
    let x = linalg::solve(&a, &b).ok_or_else(|| Error::invalid("singular Dirichlet system"))?;
    let mut values = vec![BigRational::zero(); n];
    for (i, v) in unknowns.iter().enumerate() {
        values[v.index()] = x[i].clone();
    }
    for v in g.vertices() {
        if kind[v.index()] == 1 {
            values[v.index()] = BigRational::one();
        }
    }
    Ok(HarmonicSolution { values, isolated })
}

/// Exact law of the loop erasure of a simple random walk from `source` stopped at `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LerwLaw {
    pub source: VertexId,
    pub target: VertexId,
    pub support: BTreeMap<Vec<VertexId>, ExactProb>,
}

impl LerwLaw {
    pub fn total(&self) -> BigRational {
        self.support.values().map(|p| p.0.clone()).sum()
    }

    pub fn probability(&self, path: &[VertexId]) -> ExactProb {
        self.support.get(path).cloned().unwrap_or_else(ExactProb::zero)
    }
}

/// Builds the law by growing self-avoiding prefixes: from the current tip the next vertex is
/// the first step of a walk conditioned to reach `target` before returning to the prefix.
/// Neighbours are tried in ascending id order.
pub fn exact_lerw_law(g: &MultiGraph, source: VertexId, target: VertexId) -> Result<LerwLaw> {
    exact_lerw_law_with(g, source, target, &ExactLimits::default())
}

pub fn exact_lerw_law_with(
    g: &MultiGraph,
    source: VertexId,
    target: VertexId,
    limits: &ExactLimits,
) -> Result<LerwLaw> {
    g.check_vertex(source)?;
    g.check_vertex(target)?;
    if source == target {
        return Err(Error::invalid("source and target must differ"));
    }
    if !g.is_connected() {
        return Err(Error::invalid("graph must be connected"));
    }
    let mut law = LerwLaw {
        source,
        target,
        support: BTreeMap::new(),
    };
    let mut prefix = vec![source];
    grow(g, target, &mut prefix, BigRational::one(), &mut law, limits)?;
    Ok(law)
}

fn grow(
    g: &MultiGraph,
    target: VertexId,
    prefix: &mut Vec<VertexId>,
    weight: BigRational,
    law: &mut LerwLaw,
    limits: &ExactLimits,
) -> Result<()> {
    let tip = *prefix.last().expect("prefix is never empty");
    if tip == target {
        if law.support.len() >= limits.max_lerw_paths {
            return Err(Error::ResourceLimit {
                what: "exact loop-erased walk support",
                requested: law.support.len() as u64 + 1,
                limit: limits.max_lerw_paths as u64,
            });
        }
        law.support.insert(prefix.clone(), ExactProb(weight));
        return Ok(());
    }
    let h = harmonic_hitting_probability(g, &[target], prefix)?;
    let mut nbrs: Vec<VertexId> = g.neighbors(tip).iter().map(|(w, _)| *w).collect();
    nbrs.sort();
    // parallel edges appear once per slot, so summing over slots weights by multiplicity
    let total: BigRational = nbrs.iter().map(|w| h.value(*w).clone()).sum();
    nbrs.dedup();
    for w in nbrs {
        let hw = h.value(w);
        if hw.is_zero() {
            continue;
        }
        let step = BigRational::from_integer(g.multiplicity(tip, w).into()) * hw / &total;
        prefix.push(w);
        grow(g, target, prefix, &weight * step, law, limits)?;
        prefix.pop();
    }
    Ok(())
}

/// Expected number of visits to `y` by a simple random walk on the box started at `x` and
/// killed on reaching the boundary. Zero when `x` or `y` lies on the boundary.
pub fn green_function_exact(lattice: &LatticeBox, x: VertexId, y: VertexId) -> Result<BigRational> {
    let g = lattice.graph();
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if lattice.is_boundary(x) || lattice.is_boundary(y) {
        return Ok(BigRational::zero());
    }
    let interior: Vec<VertexId> = g.vertices().filter(|&v| !lattice.is_boundary(v)).collect();
    let limits = ExactLimits::default();
    if interior.len() > limits.max_vertices {
        return Err(Error::ResourceLimit {
            what: "exact solve vertices",
            requested: interior.len() as u64,
            limit: limits.max_vertices as u64,
        });
    }
    let mut slot = vec![usize::MAX; g.vertex_count()];
    for (i, v) in interior.iter().enumerate() {
        slot[v.index()] = i;
    }
    // deg(u) G(u) - sum_{w interior} G(w) = deg(u) [u == y]
    let mut a = vec![vec![0i64; interior.len()]; interior.len()];
    let mut b = vec![BigRational::zero(); interior.len()];
    for (i, &u) in interior.iter().enumerate() {
        a[i][i] = g.degree(u) as i64;
        for &(w, _) in g.neighbors(u) {
            if slot[w.index()] != usize::MAX {
                a[i][slot[w.index()]] -= 1;
            }
        }
    }
    b[slot[y.index()]] = BigRational::from_integer((g.degree(y) as i64).into());
    let sol = linalg::solve(&a, &b).ok_or_else(|| Error::invalid("singular Green system"))?;
    Ok(sol[slot[x.index()]].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{complete_graph, cycle_graph, path_graph, LatticeCoord};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn gamblers_ruin() {
        let g = path_graph(3);
        let h = harmonic_hitting_probability(&g, &[VertexId(2)], &[VertexId(0)]).unwrap();
        assert_eq!(h.value(VertexId(1)), &q(1, 2));
        let g = path_graph(5);
        let h = harmonic_hitting_probability(&g, &[VertexId(4)], &[VertexId(0)]).unwrap();
        let inner: Vec<_> = (1..4).map(|i| h.value(VertexId(i)).clone()).collect();
        assert_eq!(inner, vec![q(1, 4), q(1, 2), q(3, 4)]);
        let g = cycle_graph(4);
        let h = harmonic_hitting_probability(&g, &[VertexId(0)], &[VertexId(2)]).unwrap();
        assert_eq!(h.value(VertexId(1)), &q(1, 2));
        assert_eq!(h.value(VertexId(3)), &q(1, 2));
    }

    #[test]
    fn mean_value_property() {
        let g = complete_graph(5);
        let h = harmonic_hitting_probability(&g, &[VertexId(0)], &[VertexId(1), VertexId(2)]).unwrap();
        for v in [VertexId(3), VertexId(4)] {
            let avg: BigRational = g.neighbors(v).iter().map(|(w, _)| h.value(*w).clone()).sum::<BigRational>()
                / BigRational::from_integer((g.degree(v) as i64).into());
            assert_eq!(&avg, h.value(v));
        }
    }

    #[test]
    fn isolated_components_are_flagged() {
        let g = MultiGraph::from_edges(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        let h = harmonic_hitting_probability(&g, &[VertexId(2)], &[VertexId(0)]).unwrap();
        assert_eq!(h.isolated, vec![VertexId(3), VertexId(4)]);
        assert!(h.value(VertexId(3)).is_zero());
        assert!(harmonic_hitting_probability(&g, &[VertexId(2)], &[VertexId(2)]).is_err());
        assert!(harmonic_hitting_probability(&g, &[], &[VertexId(2)]).is_err());
    }

    #[test]
    fn lerw_laws() {
        let law = exact_lerw_law(&path_graph(3), VertexId(0), VertexId(2)).unwrap();
        assert_eq!(law.support.len(), 1);
        assert_eq!(law.probability(&[VertexId(0), VertexId(1), VertexId(2)]), ExactProb::one());

        let law = exact_lerw_law(&cycle_graph(4), VertexId(0), VertexId(2)).unwrap();
        assert_eq!(law.support.len(), 2);
        assert!(law.support.values().all(|p| *p == ExactProb::new(1, 2)));

        let law = exact_lerw_law(&complete_graph(4), VertexId(0), VertexId(3)).unwrap();
        assert_eq!(law.total(), BigRational::one());
        assert_eq!(law.support.len(), 5);
        for path in law.support.keys() {
            let mut sorted = path.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), path.len());
            assert_eq!(path.first(), Some(&VertexId(0)));
            assert_eq!(path.last(), Some(&VertexId(3)));
        }
    }

    #[test]
    fn green_on_small_boxes() {
        // absorbing chain on {-1, 0, 1}: g0 = 1 + g1/2 + g-1/2, g(+-1) = g0/2, so g0 = 2
        let b = LatticeBox::new(1, 2).unwrap();
        let o = b.origin();
        assert_eq!(green_function_exact(&b, o, o).unwrap(), q(2, 1));
        let edge = b.vertex(&LatticeCoord(vec![2])).unwrap();
        assert!(green_function_exact(&b, edge, o).unwrap().is_zero());

        let values: Vec<BigRational> = (1..=3)
            .map(|n| {
                let b = LatticeBox::new(3, n).unwrap();
                green_function_exact(&b, b.origin(), b.origin()).unwrap()
            })
            .collect();
        assert_eq!(values[0], q(1, 1));
        assert!(values[0] < values[1] && values[1] < values[2]);
    }
}
